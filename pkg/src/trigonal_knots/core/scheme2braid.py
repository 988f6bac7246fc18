"""
Conversion of an L-scheme and a bidegree (3, b) into the braid b_C.

The scheme is first expanded into an alternating string of max/min
tangencies (solitary nodes and crossings are split into a min/max or
max/min pair), framed by boundary symbols that depend on the terminal
and the parity of k, then read off pairwise.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from trigonal_knots.core import braid3
from trigonal_knots.core.errors import IllegalTerminalForBidegree
from trigonal_knots.core.lscheme import Kind, LScheme, SchemeSymbol, Terminal, sym

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bidegree:
    """b = 3k - 1 - epsilon with epsilon in {0, 1}."""

    b: int
    k: int
    epsilon: int

    @classmethod
    def from_b(cls, b: int) -> "Bidegree":
        if b < 1:
            raise IllegalTerminalForBidegree(f"degree b must be positive, got {b}")
        if b % 3 == 0:
            raise IllegalTerminalForBidegree(
                f"b = {b} is divisible by 3; normalize the bidegree first"
            )
        epsilon = 0 if b % 3 == 2 else 1
        return cls(b, (b + 1 + epsilon) // 3, epsilon)

    def allows(self, terminal: Terminal) -> bool:
        return terminal.residue == self.b % 3


def legal_terminals(b: int) -> Tuple[Terminal, ...]:
    if b % 3 == 2:
        return (Terminal.DOWN, Terminal.UP)
    if b % 3 == 1:
        return (Terminal.VEE, Terminal.WEDGE)
    return ()


# (terminal, k parity) -> (prefix, suffix)
_BOUNDARY = {
    (Terminal.DOWN, 0): ('>2', ('<1',)),
    (Terminal.DOWN, 1): ('>1', ('<1',)),
    (Terminal.UP, 0): ('>1', ('<2',)),
    (Terminal.UP, 1): ('>2', ('<2',)),
    (Terminal.VEE, 0): ('>2', ('<1', '>1', '<1')),
    (Terminal.VEE, 1): ('>1', ('<1', '>1', '<1')),
    (Terminal.WEDGE, 0): ('>1', ('<2', '>2', '<2')),
    (Terminal.WEDGE, 1): ('>2', ('<2', '>2', '<2')),
}


def boundary_symbols(terminal: Terminal, d: Bidegree) -> Tuple[SchemeSymbol, Tuple[SchemeSymbol, ...]]:
    """Prefix and suffix tangencies framing the scheme."""
    if not d.allows(terminal):
        raise IllegalTerminalForBidegree(
            f"terminal {terminal.value!r} is not legal for b = {d.b}"
        )
    prefix, suffix = _BOUNDARY[(terminal, d.k % 2)]
    return sym(prefix), tuple(sym(t) for t in suffix)


def expand_scheme(scheme: LScheme, d: Bidegree) -> List[SchemeSymbol]:
    prefix, suffix = boundary_symbols(scheme.terminal, d)
    expanded = [prefix]
    for symbol in scheme.body:
        j = symbol.index
        if symbol.kind is Kind.SOLITARY:
            expanded += [SchemeSymbol(Kind.MIN, j), SchemeSymbol(Kind.MAX, j)]
        elif symbol.kind is Kind.CROSSING:
            expanded += [SchemeSymbol(Kind.MAX, j), SchemeSymbol(Kind.MIN, j)]
        else:
            expanded.append(symbol)
    expanded.extend(suffix)
    return expanded


def pair_expansion(expanded: List[SchemeSymbol]) -> List[Tuple[int, int]]:
    """Consecutive (max, min) index pairs of an expanded sequence."""
    if len(expanded) % 2:
        raise ValueError("expanded sequence has odd length")
    pairs = []
    for high, low in zip(expanded[0::2], expanded[1::2]):
        if high.kind is not Kind.MAX or low.kind is not Kind.MIN:
            raise ValueError(f"expected a max/min pair, got {high.token} {low.token}")
        pairs.append((high.index, low.index))
    return pairs


_PAIR_WORDS = {
    (1, 1): (-1,),
    (2, 2): (-2,),
    (1, 2): (-1, -2, 1),
    (2, 1): (-2, -1, 2),
}


def to_braid(scheme: LScheme, d: Bidegree) -> braid3.BraidWord:
    """
    Braid b_C of a scheme realized in bidegree (3, b).

    Args:
        scheme: Valid L-scheme
        d: Bidegree consistent with the scheme's terminal

    Returns:
        Word of the real part followed by (sigma1 sigma2 sigma1)^k
    """
    word: List[int] = []
    for pair in pair_expansion(expand_scheme(scheme, d)):
        word.extend(_PAIR_WORDS[pair])
    word.extend(braid3.power(braid3.delta(), d.k))
    logger.debug(f"Braid of {scheme.render()!r} at b={d.b}: {braid3.render_braid(word)}")
    return tuple(word)


def scheme_link(scheme: LScheme, b: int) -> braid3.LinkData:
    """Closure data of the braid of a scheme at degree b."""
    return braid3.closure_link(to_braid(scheme, Bidegree.from_b(b)))
