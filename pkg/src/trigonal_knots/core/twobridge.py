"""
Two-bridge knot arithmetic and harmonic knot diagrams.

Knots C(m) and C(m, n) in Conway notation, their Schubert fractions,
crossing numbers, lexicographic degree formulas, and the reading of a
trigonal diagram as a rational tangle.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from flint import arb
from sympy import Poly, Rational

from trigonal_knots.config.settings import REFINE_LIMIT_BITS
from trigonal_knots.core.curvetrace import (
    CurveEvents,
    EventKind,
    PolyMap,
    analyze_curve,
    chebyshev,
    crossing_parameters,
)
from trigonal_knots.core.errors import (
    InvalidTwoBridgeSpec,
    NotCoprime,
    NotTwoBridgeTrigonal,
    UnsupportedDegree,
)
from trigonal_knots.core.polyalg import T_SYM, separate

logger = logging.getLogger(__name__)

TORUS = 'torus'
TWIST = 'twist'


@dataclass(frozen=True)
class TwoBridgeSpec:
    """C(m) with m odd, or C(m, n) with mn positive and even."""

    kind: str
    m: int
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind == TORUS:
            if self.m % 2 == 0 or abs(self.m) < 3:
                raise InvalidTwoBridgeSpec(f"C({self.m}) needs m odd with |m| >= 3")
        elif self.kind == TWIST:
            if self.n is None or self.m * self.n <= 0 or (self.m * self.n) % 2:
                raise InvalidTwoBridgeSpec(f"C({self.m},{self.n}) needs mn positive and even")
        else:
            raise InvalidTwoBridgeSpec(f"unknown kind {self.kind!r}")

    def __str__(self) -> str:
        return f"C({self.m})" if self.kind == TORUS else f"C({self.m},{self.n})"

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'm': self.m, 'n': self.n, 'label': str(self)}


def Torus(m: int) -> TwoBridgeSpec:  # pylint: disable=invalid-name
    return TwoBridgeSpec(TORUS, m)


def Twist(m: int, n: int) -> TwoBridgeSpec:  # pylint: disable=invalid-name
    return TwoBridgeSpec(TWIST, m, n)


def canonical_spec(spec: TwoBridgeSpec) -> TwoBridgeSpec:
    """Drop mirror signs; for C(m, n) with m + n odd make m even."""
    if spec.kind == TORUS:
        return Torus(abs(spec.m))
    m, n = abs(spec.m), abs(spec.n)
    if m % 2 and (m + n) % 2:
        m, n = n, m
    return Twist(m, n)


def crossing_number(spec: TwoBridgeSpec) -> int:
    if spec.kind == TORUS:
        return abs(spec.m)
    return abs(spec.m) + abs(spec.n)


# Degree triples

@dataclass(frozen=True)
class DegreeTriple:
    a: int
    b: int
    c: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def to_dict(self) -> Dict:
        return {'a': self.a, 'b': self.b, 'c': self.c}


UNKNOT_DEGREE = DegreeTriple(1, 2, 3)


def lexdeg_theorem_main(N: int) -> DegreeTriple:  # pylint: disable=invalid-name
    """Lexicographic degree (3, floor((3N-1)/2), floor(3N/2)+1) of C(m) and C(m, n)."""
    if N < 3:
        raise InvalidTwoBridgeSpec("crossing number must be at least 3")
    triple = DegreeTriple(3, (3 * N - 1) // 2, 3 * N // 2 + 1)
    assert triple.b + triple.c == 3 * N
    return triple


def lexdeg_lower_general(N: int) -> DegreeTriple:  # pylint: disable=invalid-name
    """Lower bound (3, N+1, 2N-1) for any knot of crossing number N."""
    if N < 1:
        raise InvalidTwoBridgeSpec("crossing number must be positive")
    return DegreeTriple(3, N + 1, 2 * N - 1)


def harmonic_degree_claim(N: int) -> Optional[DegreeTriple]:  # pylint: disable=invalid-name
    """H(3, N+1, 2N-1) attains the general bound when N is not 2 mod 3."""
    if N < 3 or N % 3 == 2:
        return None
    return DegreeTriple(3, N + 1, 2 * N - 1)


# Fractions

@dataclass(frozen=True)
class KnotFraction:
    """Schubert normal form alpha/beta, 0 < beta < alpha, coprime."""

    alpha: int
    beta: int

    def __post_init__(self):
        if not 0 < self.beta < self.alpha or math.gcd(self.alpha, self.beta) != 1:
            raise InvalidTwoBridgeSpec(f"{self.alpha}/{self.beta} is not a Schubert fraction")

    @classmethod
    def from_ratio(cls, p: int, q: int) -> "KnotFraction":
        """Normalize p/q (any signs) to 0 < beta < alpha."""
        alpha = abs(p)
        sign = 1 if p > 0 else -1
        return cls(alpha, (sign * q) % alpha)

    def class_members(self, up_to_mirror: bool = False) -> List[int]:
        inverse = pow(self.beta, -1, self.alpha)
        members = {self.beta, inverse}
        if up_to_mirror:
            members |= {(-b) % self.alpha for b in members}
        return sorted(members)

    def canonical(self, up_to_mirror: bool = True) -> "KnotFraction":
        return KnotFraction(self.alpha, self.class_members(up_to_mirror)[0])

    def __str__(self) -> str:
        return f"{self.alpha}/{self.beta}"

    def to_dict(self) -> Dict:
        return {'alpha': self.alpha, 'beta': self.beta, 'text': str(self)}


def continued_fraction(entries: Sequence[int]) -> Tuple[int, int]:
    """[a1, ..., an] = a1 + 1/(a2 + ...) as an unreduced pair (p, q)."""
    num, den = 1, 0
    for a in reversed(entries):
        num, den = a * num + den, num
    return num, den


def spec_fraction(spec: TwoBridgeSpec) -> KnotFraction:
    entries = [spec.m] if spec.kind == TORUS else [spec.m, spec.n]
    return KnotFraction.from_ratio(*continued_fraction(entries))


def fractions_equivalent(f: KnotFraction, g: KnotFraction, up_to_mirror: bool = False) -> bool:
    return f.alpha == g.alpha and g.beta in f.class_members(up_to_mirror)


# Diagrams

@dataclass(frozen=True)
class DiagramCrossing:
    """
    Crossing of the xy-projection.

    over is 't' when the larger parameter passes above; handedness is +1 when
    the strand rising in y passes above.
    """

    label: int
    j: int
    x: arb
    s: arb
    t: arb
    over: str
    handedness: int

    def to_dict(self) -> Dict:
        return {
            'label': self.label,
            'j': self.j,
            'x': float(self.x),
            's': float(self.s),
            't': float(self.t),
            'over': self.over,
            'handedness': self.handedness,
        }


@dataclass
class KnotDiagram:
    crossings: List[DiagramCrossing]
    gauss: List[int]
    ends: List[Tuple[int, str]]
    opening: Optional[int]
    closing: Optional[int]
    z: Poly = field(repr=False)
    traced: CurveEvents = field(repr=False)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def tangle_word(self) -> List[Tuple[int, int]]:
        return reduced_tangle_word(self)

    def to_dict(self) -> Dict:
        return {
            'crossings': [c.to_dict() for c in self.crossings],
            'gauss': self.gauss,
            'opening': self.opening,
            'closing': self.closing,
        }


def diagram_from_curve(traced: CurveEvents, z: Poly,
                       limit_bits: int = REFINE_LIMIT_BITS) -> KnotDiagram:
    """
    Attach heights z(t) to the crossings of an analyzed plane curve.

    Raises:
        DegenerateCurve: when z agrees at the two parameters of a crossing
    """
    m, reducer = traced.polymap, traced.reducer
    dp, dq = m.P.diff(T_SYM), m.Q.diff(T_SYM)
    dz = reducer.divided_difference(z)
    s_dp, d_dp = reducer.half_sum(dp), reducer.divided_difference(dp)
    slope_gap = reducer.divided_difference(dq) * s_dp - d_dp * reducer.half_sum(dq)
    vertical = s_dp ** 2 - reducer.discriminant() * d_dp ** 2 * Rational(1, 4)

    events = traced.crossings()
    crossings = []
    for label, event in enumerate(events, start=1):
        z_sign = event.root.sign_of(dz)
        rising_sign = event.root.sign_of(slope_gap) * event.root.sign_of(vertical)
        s, t = crossing_parameters(reducer, event.root, 64)
        crossings.append(DiagramCrossing(
            label, event.j, event.x, s, t, 't' if z_sign > 0 else 's', rising_sign * z_sign,
        ))

    ends = [(c, 's') for c in crossings] + [(c, 't') for c in crossings]

    def enclose(end, bits):
        crossing, side = end
        s_box, t_box = crossing_parameters(reducer, events[crossing.label - 1].root, bits)
        return s_box if side == 's' else t_box

    ordered = separate(ends, enclose, limit_bits)
    order = [(c.label, side) for (c, side), _ in ordered]
    gauss = [c.label if c.over == side else -c.label for (c, side), _ in ordered]

    opening = next((e.j for e in traced.events if e.kind is EventKind.TANGENCY_MIN), None)
    closing = next((e.j for e in traced.events if e.kind is EventKind.TANGENCY_MAX), None)
    return KnotDiagram(crossings, gauss, order, opening, closing, z, traced)


def harmonic_diagram(a: int, b: int, c: int) -> KnotDiagram:
    """
    Diagram of the harmonic knot (T_a(t), T_b(t), T_c(t)).

    Raises:
        UnsupportedDegree: for a != 3
        NotCoprime: unless a, b, c are pairwise coprime
    """
    if a != 3:
        raise UnsupportedDegree("harmonic diagrams are computed for a = 3 only")
    if math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
        raise NotCoprime(f"({a},{b},{c}) are not pairwise coprime")
    if b <= a:
        raise UnsupportedDegree("harmonic diagrams need a < b")
    traced = analyze_curve(PolyMap(chebyshev(a), chebyshev(b)))
    diagram = diagram_from_curve(traced, chebyshev(c))
    logger.info(f"Harmonic diagram H({a},{b},{c}) has {diagram.crossing_count} crossings")
    return diagram


def reduced_tangle_word(diagram: KnotDiagram) -> List[Tuple[int, int]]:
    """
    Crossings as (sheet pair, handedness) along x with kinks and bigons removed.

    Crossings of the pair born at the min (resp. dying at the max) that sit
    next to it are kinks; adjacent crossings of one pair with opposite
    handedness cancel.
    """
    word = [(c.j, c.handedness) for c in diagram.crossings]
    changed = True
    while changed:
        changed = False
        while word and word[0][0] == diagram.opening:
            word.pop(0)
            changed = True
        while word and word[-1][0] == diagram.closing:
            word.pop()
            changed = True
        for i in range(len(word) - 1):
            if word[i][0] == word[i + 1][0] and word[i][1] == -word[i + 1][1]:
                del word[i:i + 2]
                changed = True
                break
    return word


def tangle_entries(diagram: KnotDiagram) -> List[int]:
    """Twist counts per run; runs on the middle pair count +, the outer pair -."""
    word = reduced_tangle_word(diagram)
    middle = 3 - diagram.opening
    entries: List[int] = []
    previous = None
    for j, hand in word:
        value = hand if j == middle else -hand
        if j == previous:
            entries[-1] += value
        else:
            entries.append(value)
        previous = j
    return entries


def identify_trigonal_diagram(diagram: KnotDiagram) -> KnotFraction:
    """
    Schubert fraction of a trigonal diagram, canonical up to mirror image.

    Raises:
        NotTwoBridgeTrigonal: without a min/max pair, or when the reading is
            the unknot or a link
    """
    if diagram.opening is None or diagram.closing is None:
        raise NotTwoBridgeTrigonal("diagram has no min/max tangency pair")
    entries = tangle_entries(diagram)
    if not entries:
        raise NotTwoBridgeTrigonal("diagram reduces to the trivial knot")
    if (len(entries) % 2 == 1) != (diagram.opening == diagram.closing):
        raise NotTwoBridgeTrigonal("twist runs do not match the closing tangency")
    p, q = continued_fraction(entries)
    if abs(p) <= 1:
        raise NotTwoBridgeTrigonal(f"tangle word {entries} closes to the trivial knot")
    if p % 2 == 0:
        raise NotTwoBridgeTrigonal(f"tangle word {entries} closes to a two-component link")
    fraction = KnotFraction.from_ratio(p, q).canonical(up_to_mirror=True)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(json.dumps({'event': 'diagram_identified', 'entries': entries,
                                 'fraction': str(fraction)}))
    return fraction
