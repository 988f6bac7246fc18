"""
Exception hierarchy shared by every pipeline.

Each error knows the CLI exit code it maps to: 2 for malformed input,
3 for inputs the genericity hypotheses refuse.
"""

from typing import Any, Dict, Optional

INPUT_ERROR = 2
DEGENERATE_INPUT = 3


class TrigonalError(Exception):
    """Base class for all library errors."""

    exit_code = INPUT_ERROR

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'success': False,
            'error': self.message,
            'error_type': type(self).__name__,
            'details': self.details,
        }


# Scheme text and rewriting

class UnknownToken(TrigonalError):
    def __init__(self, token: str, position: int):
        super().__init__(f"unknown token {token!r} at position {position}",
                         {'token': token, 'position': position})
        self.position = position


class MissingTerminal(TrigonalError):
    pass


class BranchCountViolation(TrigonalError):
    """Raised when the real-branch counter scan rejects a symbol."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})", {'position': position})
        self.position = position


class PatternMismatch(TrigonalError):
    pass


class StepBudgetExceeded(TrigonalError):
    def __init__(self, max_steps: int, frontier_size: int):
        super().__init__(
            f"no alternating scheme reached within {max_steps} expansions",
            {'max_steps': max_steps, 'frontier_size': frontier_size},
        )
        self.max_steps = max_steps
        self.frontier_size = frontier_size


# Braids and bidegrees

class InvalidBraidText(TrigonalError):
    pass


class InconsistentLinking(TrigonalError):
    """Crossings between two closure components do not sum to an even number."""

    exit_code = DEGENERATE_INPUT

    def __init__(self, total: int, pair: tuple):
        super().__init__(f"odd crossing sum {total} between components {pair}",
                         {'total': total, 'pair': list(pair)})


class IllegalTerminalForBidegree(TrigonalError):
    pass


# Polynomial input

class InvalidPolynomial(TrigonalError):
    pass


class UnsupportedDegree(TrigonalError):
    pass


class DegenerateCurve(TrigonalError):
    """The map is not generic enough: non-nodal point, tie, or bad count."""

    exit_code = DEGENERATE_INPUT


class NotReducible(TrigonalError):
    exit_code = DEGENERATE_INPUT


# Knot arithmetic and certificates

class InvalidTwoBridgeSpec(TrigonalError):
    pass


class NotTwoBridgeTrigonal(TrigonalError):
    exit_code = DEGENERATE_INPUT


class NotCoprime(TrigonalError):
    pass


class SingularSystem(TrigonalError):
    exit_code = DEGENERATE_INPUT


class WrongCrossingCount(TrigonalError):
    pass


class AlternatingBoundRequiresD6(TrigonalError):
    pass
