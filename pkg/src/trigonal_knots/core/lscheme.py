"""
L-schemes of real trigonal curves and their elementary rewriting moves.

Token alphabet: <j (min tangency), >j (max tangency), xj (crossing),
oj (solitary node), followed by one terminal among dn, up, v, ^.
The index j names the pair of sheets (j, j+1) counted from below.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from trigonal_knots.core.errors import (
    BranchCountViolation,
    MissingTerminal,
    PatternMismatch,
    StepBudgetExceeded,
    UnknownToken,
)

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    MIN = '<'
    MAX = '>'
    CROSSING = 'x'
    SOLITARY = 'o'


class Terminal(str, Enum):
    DOWN = 'dn'
    UP = 'up'
    VEE = 'v'
    WEDGE = '^'

    @property
    def residue(self) -> int:
        """b mod 3 for which this terminal is legal."""
        return 2 if self in (Terminal.DOWN, Terminal.UP) else 1

    def flipped(self) -> "Terminal":
        return _FLIPPED_TERMINAL[self]


_FLIPPED_TERMINAL = {
    Terminal.DOWN: Terminal.UP,
    Terminal.UP: Terminal.DOWN,
    Terminal.VEE: Terminal.WEDGE,
    Terminal.WEDGE: Terminal.VEE,
}


@dataclass(frozen=True)
class SchemeSymbol:
    kind: Kind
    index: int

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"symbol index must be 1 or 2, got {self.index}")

    @property
    def token(self) -> str:
        return f"{self.kind.value}{self.index}"

    def swapped(self) -> "SchemeSymbol":
        return SchemeSymbol(self.kind, 3 - self.index)

    def __str__(self) -> str:
        return self.token


def sym(token: str) -> SchemeSymbol:
    """Symbol from a single body token such as 'x1'."""
    return SchemeSymbol(Kind(token[0]), int(token[1]))


_BODY_TOKENS = {f"{k.value}{j}": SchemeSymbol(k, j) for k in Kind for j in (1, 2)}
_TERMINAL_TOKENS = {t.value: t for t in Terminal}


def scan_branches(body: Sequence[SchemeSymbol]) -> List[int]:
    """
    Run the real-branch counter over a body.

    Returns:
        Counter value before each symbol plus the final value

    Raises:
        BranchCountViolation: at the first symbol the counter forbids
    """
    r = 1
    history = []
    for pos, symbol in enumerate(body):
        history.append(r)
        if symbol.kind is Kind.MIN:
            if r != 1:
                raise BranchCountViolation("min tangency needs one real branch", pos)
            r = 3
        elif symbol.kind is Kind.MAX:
            if r != 3:
                raise BranchCountViolation("max tangency needs three real branches", pos)
            r = 1
        elif symbol.kind is Kind.CROSSING:
            if r != 3:
                raise BranchCountViolation("crossing needs three real branches", pos)
        elif r != 1:
            raise BranchCountViolation("solitary node needs one real branch", pos)
    if r != 1:
        raise BranchCountViolation("scheme ends with three real branches", len(body))
    history.append(r)
    return history


@dataclass(frozen=True)
class LScheme:
    """Validated body of event symbols plus a terminal symbol."""

    body: Tuple[SchemeSymbol, ...]
    terminal: Terminal

    def __post_init__(self):
        object.__setattr__(self, 'body', tuple(self.body))
        scan_branches(self.body)

    @classmethod
    def from_symbols(cls, tokens: Sequence[str], terminal: Union[Terminal, str]) -> "LScheme":
        return cls(tuple(sym(t) for t in tokens), Terminal(terminal))

    @property
    def crossing_count(self) -> int:
        return sum(1 for s in self.body if s.kind is Kind.CROSSING)

    @property
    def solitary_count(self) -> int:
        return sum(1 for s in self.body if s.kind is Kind.SOLITARY)

    def render(self) -> str:
        return ' '.join([s.token for s in self.body] + [self.terminal.value])

    def __str__(self) -> str:
        return self.render()


def parse_scheme(text: str) -> LScheme:
    """Parse whitespace-separated tokens; the last one must be a terminal."""
    tokens = text.split()
    if not tokens or tokens[-1] not in _TERMINAL_TOKENS:
        for pos, token in enumerate(tokens):
            if token not in _BODY_TOKENS and token not in _TERMINAL_TOKENS:
                raise UnknownToken(token, pos)
        raise MissingTerminal(f"scheme {text!r} does not end with one of dn, up, v, ^")
    body = []
    for pos, token in enumerate(tokens[:-1]):
        if token not in _BODY_TOKENS:
            raise UnknownToken(token, pos)
        body.append(_BODY_TOKENS[token])
    return LScheme(tuple(body), _TERMINAL_TOKENS[tokens[-1]])


def render(scheme: LScheme) -> str:
    return scheme.render()


def normalize(text: str) -> str:
    """Canonical single-space spelling of a valid scheme text."""
    return parse_scheme(text).render()


def swap_indices(scheme: LScheme) -> LScheme:
    """Mirror the picture vertically: every index j becomes 3 - j."""
    return LScheme(tuple(s.swapped() for s in scheme.body), scheme.terminal.flipped())


# Alternating targets

def _tangency_window(body: Sequence[SchemeSymbol]) -> Optional[Tuple[SchemeSymbol, ...]]:
    """The single min..max stretch of the body, or None."""
    kinds = [s.kind for s in body]
    if kinds.count(Kind.MIN) != 1:
        return None
    first = kinds.index(Kind.MIN)
    last = kinds.index(Kind.MAX)
    return tuple(body[first:last + 1])


def _matches_target(window: Tuple[SchemeSymbol, ...]) -> bool:
    if len(window) < 2 or window[0] != sym('<2'):
        return False
    crossings = window[1:-1]
    closing = window[-1]
    indices = [s.index for s in crossings]
    if closing == sym('>2'):
        return all(j == 1 for j in indices)
    if closing == sym('>1'):
        m = indices.count(1)
        n = len(indices) - m
        return m >= 1 and n >= 1 and indices == [1] * m + [2] * n
    return False


def is_alternating(scheme: LScheme) -> bool:
    """
    True when the body is <2 x1^m >2 or <2 x1^m x2^n >1, up to swapping 1 and 2.

    Solitary nodes outside the tangency window are ignored.
    """
    window = _tangency_window(scheme.body)
    if window is None:
        return False
    return _matches_target(window) or _matches_target(tuple(s.swapped() for s in window))


# Rewriting

class RuleFamily(IntEnum):
    CROSSING_PAST_MAX = 1  # x_j >_{j'}  <->  x_{j'} >_j
    CROSSING_PAST_MIN = 2  # <_{j'} x_j  <->  <_j x_{j'}
    CANCEL_PAIR = 3  # x_j x_j  ->  (nothing)
    MAX_TO_SOLITARY = 4  # x_j >_j  <->  >_j o_j
    MIN_TO_SOLITARY = 5  # <_j x_j  <->  o_j <_j
    BRAID_RELATION = 6  # x2 x1 x2  <->  x1 x2 x1


class Direction(str, Enum):
    FORWARD = 'forward'
    BACKWARD = 'backward'


def _pattern(text: str) -> Tuple[SchemeSymbol, ...]:
    return tuple(sym(t) for t in text.split())


# (family, forward lhs, forward rhs); backward swaps the sides.
_FIXED_RULES: List[Tuple[RuleFamily, Tuple[SchemeSymbol, ...], Tuple[SchemeSymbol, ...]]] = [
    (RuleFamily.CROSSING_PAST_MAX, _pattern('x1 >2'), _pattern('x2 >1')),
    (RuleFamily.CROSSING_PAST_MIN, _pattern('<2 x1'), _pattern('<1 x2')),
    (RuleFamily.BRAID_RELATION, _pattern('x2 x1 x2'), _pattern('x1 x2 x1')),
]

for _j in (1, 2):
    _FIXED_RULES.append(
        (RuleFamily.MAX_TO_SOLITARY, _pattern(f'x{_j} >{_j}'), _pattern(f'>{_j} o{_j}')))
    _FIXED_RULES.append(
        (RuleFamily.MIN_TO_SOLITARY, _pattern(f'<{_j} x{_j}'), _pattern(f'o{_j} <{_j}')))


@dataclass(frozen=True)
class RewriteRule:
    """
    One elementary move located in a body.

    index is only used by the backward cancel move (inserting x_j x_j).
    """

    rule_id: RuleFamily
    direction: Direction
    position: int
    index: Optional[int] = None

    def to_dict(self) -> Dict:
        data = {
            'rule_id': int(self.rule_id),
            'direction': self.direction.value,
            'position': self.position,
        }
        if self.index is not None:
            data['index'] = self.index
        return data


def _sides(rule: RewriteRule) -> List[Tuple[Tuple[SchemeSymbol, ...], Tuple[SchemeSymbol, ...]]]:
    sides = []
    if rule.rule_id is RuleFamily.CANCEL_PAIR:
        if rule.direction is Direction.FORWARD:
            sides = [(_pattern(f'x{j} x{j}'), ()) for j in (1, 2)]
        else:
            j = rule.index or 1
            sides = [((), _pattern(f'x{j} x{j}'))]
        return sides
    for family, lhs, rhs in _FIXED_RULES:
        if family is rule.rule_id:
            sides.append((lhs, rhs) if rule.direction is Direction.FORWARD else (rhs, lhs))
    return sides


def apply_rewrite(scheme: LScheme, rule: RewriteRule) -> LScheme:
    """
    Apply a move at its position.

    Raises:
        PatternMismatch: if the body does not carry the rule's pattern there
    """
    body = scheme.body
    pos = rule.position
    if pos < 0 or pos > len(body):
        raise PatternMismatch(f"position {pos} outside body of length {len(body)}")
    for lhs, rhs in _sides(rule):
        if not lhs:
            # Insertion needs three real branches at the gap.
            if scan_branches(body)[pos] != 3:
                continue
        elif body[pos:pos + len(lhs)] != lhs:
            continue
        return LScheme(body[:pos] + rhs + body[pos + len(lhs):], scheme.terminal)
    raise PatternMismatch(
        f"rule {rule.rule_id.name}/{rule.direction.value} does not match "
        f"{scheme.render()!r} at position {pos}"
    )


def _candidate_rules(scheme: LScheme) -> Iterator[RewriteRule]:
    for pos in range(len(scheme.body) + 1):
        for family in RuleFamily:
            for direction in Direction:
                if family is RuleFamily.CANCEL_PAIR and direction is Direction.BACKWARD:
                    for j in (1, 2):
                        yield RewriteRule(family, direction, pos, j)
                else:
                    yield RewriteRule(family, direction, pos)


def rewrite_neighbors(scheme: LScheme) -> List[Tuple[RewriteRule, LScheme]]:
    """Every legal single move, ordered by position, then family, then direction."""
    neighbors = []
    for rule in _candidate_rules(scheme):
        try:
            neighbors.append((rule, apply_rewrite(scheme, rule)))
        except PatternMismatch:
            continue
    return neighbors


@dataclass(frozen=True)
class ReductionStep:
    rule: RewriteRule
    scheme: LScheme

    def to_dict(self) -> Dict:
        return {**self.rule.to_dict(), 'scheme': self.scheme.render()}


@dataclass(frozen=True)
class ReductionPath:
    start: LScheme
    steps: Tuple[ReductionStep, ...] = ()
    expansions: int = 0

    @property
    def final(self) -> LScheme:
        return self.steps[-1].scheme if self.steps else self.start

    def schemes(self) -> List[LScheme]:
        return [self.start] + [step.scheme for step in self.steps]

    def to_dict(self) -> List[Dict]:
        return [step.to_dict() for step in self.steps]


@dataclass(frozen=True)
class Failure:
    start: LScheme
    reason: str
    frontier_size: int
    expansions: int = 0
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'success': False,
            'start': self.start.render(),
            'error': self.reason,
            'frontier_size': self.frontier_size,
            'expansions': self.expansions,
        }


def _search(scheme: LScheme, max_steps: int) -> Union[ReductionPath, Failure]:
    queue = deque([(scheme, ())])
    visited = {scheme.render()}
    expansions = 0
    while queue:
        current, path = queue.popleft()
        if is_alternating(current):
            return ReductionPath(scheme, path, expansions)
        if expansions >= max_steps:
            raise StepBudgetExceeded(max_steps, len(queue) + 1)
        expansions += 1
        for rule, neighbor in rewrite_neighbors(current):
            if neighbor.crossing_count > current.crossing_count:
                continue
            key = neighbor.render()
            if key in visited:
                continue
            visited.add(key)
            queue.append((neighbor, path + (ReductionStep(rule, neighbor),)))
    return Failure(scheme, "search space exhausted", 0, expansions)


def reduce_to_alternating(scheme: LScheme, max_steps: int = 20000) -> Union[ReductionPath, Failure]:
    """
    Breadth-first search for an alternating scheme along non-increasing moves.

    Args:
        scheme: Starting scheme
        max_steps: Maximum number of node expansions

    Returns:
        ReductionPath (shortest) or Failure carrying the frontier size
    """
    try:
        outcome = _search(scheme, max_steps)
    except StepBudgetExceeded as exc:
        outcome = Failure(scheme, exc.message, exc.frontier_size, max_steps, exc.details)
    if isinstance(outcome, Failure):
        logger.info(f"Reduction of {scheme.render()!r} failed: {outcome.reason}")
        return outcome
    logger.info(
        f"Reduced {scheme.render()!r} to {outcome.final.render()!r} in {len(outcome.steps)} moves"
    )
    return outcome


def all_valid_schemes(max_body: int, terminals: Sequence[Terminal] = (Terminal.VEE,)) -> Iterator[LScheme]:
    """Every valid scheme with body length at most max_body."""
    one_branch = [sym('o1'), sym('o2'), sym('<1'), sym('<2')]
    three_branch = [sym('x1'), sym('x2'), sym('>1'), sym('>2')]

    def bodies(length: int, r: int) -> Iterator[Tuple[SchemeSymbol, ...]]:
        if length == 0:
            if r == 1:
                yield ()
            return
        for symbol in (one_branch if r == 1 else three_branch):
            nxt = 3 if symbol.kind is Kind.MIN else 1 if symbol.kind is Kind.MAX else r
            for rest in bodies(length - 1, nxt):
                yield (symbol,) + rest

    for length, terminal in itertools.product(range(max_body + 1), terminals):
        for body in bodies(length, 1):
            yield LScheme(body, terminal)
