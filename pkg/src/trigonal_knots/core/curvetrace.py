"""
Real trigonal curves: events, node counts and the L-scheme of a map
t -> (P(t), Q(t)) with deg P = 3.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp
from flint import arb
from sympy import Poly, Rational

from trigonal_knots.config.settings import REFINE_LIMIT_BITS
from trigonal_knots.core.errors import (
    DegenerateCurve,
    InvalidPolynomial,
    NotReducible,
    UnsupportedDegree,
)
from trigonal_knots.core.lscheme import Kind, LScheme, SchemeSymbol, Terminal
from trigonal_knots.core.polyalg import (
    T_SYM,
    U_SYM,
    RealRoot,
    SymmetricReducer,
    compose_in_t,
    evaluate,
    is_squarefree,
    poly_t,
    real_roots,
    separate,
    sign,
    working_precision,
)

logger = logging.getLogger(__name__)


def chebyshev(n: int) -> Poly:
    """T_n by the recurrence T_{k+1} = 2t T_k - T_{k-1}."""
    if n < 0:
        raise InvalidPolynomial("Chebyshev degree must be nonnegative")
    prev, cur = Poly(1, T_SYM, domain='QQ'), Poly(T_SYM, T_SYM, domain='QQ')
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, Poly(2 * T_SYM, T_SYM, domain='QQ') * cur - prev
    return cur


def shifted(f: Poly, shift) -> Poly:
    """f(t + shift)."""
    return compose_in_t(f, T_SYM + Rational(shift))


def parse_poly(text: str) -> Poly:
    """
    Parse a polynomial given as low-to-high rationals ("0,-3,0,1"), or a
    Chebyshev shortcut "cheb:a" / "cheb:a@s" for T_a(t + s).
    """
    text = text.strip()
    try:
        if text.startswith('cheb:'):
            spec = text[len('cheb:'):]
            degree, _, shift = spec.partition('@')
            base = chebyshev(int(degree))
            return shifted(base, Fraction(shift)) if shift else base
        return poly_t([Fraction(c.strip()) for c in text.split(',') if c.strip()])
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidPolynomial(f"cannot parse polynomial {text!r}: {exc}") from exc


def format_poly(f: Poly) -> str:
    return ','.join(str(c) for c in reversed(f.all_coeffs()))


@dataclass(frozen=True)
class PolyMap:
    """Plane map t -> (P(t), Q(t)) with exact rational coefficients."""

    P: Poly
    Q: Poly

    def __post_init__(self):
        if self.P.degree() != 3:
            raise UnsupportedDegree(f"deg P must be 3, got {self.P.degree()}")
        if self.Q.degree() < 1:
            raise InvalidPolynomial("Q must be nonconstant")

    @classmethod
    def parse(cls, p_text: str, q_text: str) -> "PolyMap":
        return cls(parse_poly(p_text), parse_poly(q_text))

    @property
    def b(self) -> int:
        return self.Q.degree()

    def to_dict(self) -> Dict:
        return {'P': format_poly(self.P), 'Q': format_poly(self.Q), 'b': self.b}


def normalize_bidegree(m: PolyMap) -> PolyMap:
    """
    Make lc(P) positive and deg Q prime to 3 by subtracting multiples of powers of P.

    Raises:
        NotReducible: if Q collapses to a constant
    """
    p, q = m.P, m.Q
    if p.LC() < 0:
        p = -p
    while q.degree() % 3 == 0:
        k = q.degree() // 3
        q = q - (q.LC() / p.LC() ** k) * p ** k
        if q.degree() < 1:
            raise NotReducible("Q is a polynomial in P; the map is not birational onto its image")
    return PolyMap(p, q)


class EventKind(str, Enum):
    CROSSING = 'crossing'
    SOLITARY = 'solitary'
    TANGENCY_MIN = 'tangency-min'
    TANGENCY_MAX = 'tangency-max'

    @property
    def symbol_kind(self) -> Kind:
        return {
            EventKind.CROSSING: Kind.CROSSING,
            EventKind.SOLITARY: Kind.SOLITARY,
            EventKind.TANGENCY_MIN: Kind.MIN,
            EventKind.TANGENCY_MAX: Kind.MAX,
        }[self]


@dataclass
class CurveEvent:
    """
    One vertical line of the pencil carrying a non-transversal point.

    root is the sum u = s + t of the node parameters, or the tangency parameter.
    """

    kind: EventKind
    j: int
    root: RealRoot
    x: arb
    parameters: Tuple = ()

    @property
    def symbol(self) -> SchemeSymbol:
        return SchemeSymbol(self.kind.symbol_kind, self.j)

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'j': self.j,
            'x': self.x.str(20, radius=True),
            'x_approx': float(self.x),
            'parameters': [p if isinstance(p, str) else round(p, 12) for p in self.parameters],
        }


@dataclass
class CurveEvents:
    polymap: PolyMap
    events: List[CurveEvent]
    N: int
    alpha: int
    beta: int
    node_poly: Poly = field(repr=False)
    reducer: SymmetricReducer = field(repr=False)

    @property
    def b(self) -> int:
        return self.polymap.b

    def crossings(self) -> List[CurveEvent]:
        return [e for e in self.events if e.kind is EventKind.CROSSING]

    def to_dict(self) -> Dict:
        return {
            'map': self.polymap.to_dict(),
            'N': self.N,
            'alpha': self.alpha,
            'beta': self.beta,
            'events': [e.to_dict() for e in self.events],
        }


def crossing_parameters(reducer: SymmetricReducer, root: RealRoot,
                        bits: int) -> Tuple[arb, arb]:
    """Enclosures of s < t with s + t = u at a crossing root u."""
    disc = reducer.discriminant()
    while True:
        with working_precision(bits):
            u = root.enclosure(bits)
            d = evaluate(disc, u)
            if sign(d) == 1:
                sq = d.sqrt()
                return (u - sq) / 2, (u + sq) / 2
        bits += 8


def _node_events(m: PolyMap, reducer: SymmetricReducer, g: Poly) -> Tuple[List[CurveEvent], int]:
    disc = reducer.discriminant()
    x_of = reducer.half_sum(m.P)
    y_of = reducer.half_sum(m.Q)
    third = reducer.third_point(m.Q, U_SYM) - y_of
    roots = real_roots(g)
    events = []
    for root in roots:
        kind = EventKind.CROSSING if root.sign_of(disc) > 0 else EventKind.SOLITARY
        j = 1 if root.sign_of(third) > 0 else 2
        events.append(CurveEvent(kind, j, root, evaluate(x_of, root.interval)))
    return events, count_nonreal_nodes(g)


def count_nonreal_nodes(g: Poly) -> int:
    """Conjugate pairs of non-real nodes, from the non-real roots of the node polynomial."""
    nonreal = g.degree() - g.count_roots()
    if nonreal % 2:
        raise DegenerateCurve("odd number of non-real nodes")
    return int(nonreal) // 2


def _tangency_events(m: PolyMap) -> List[CurveEvent]:
    dp = m.P.diff(T_SYM)
    if sp.discriminant(dp.as_expr(), T_SYM) <= 0:
        return []
    offset = -Rational(m.P.all_coeffs()[1]) / Rational(m.P.LC())
    third = compose_in_t(m.Q, offset - 2 * T_SYM) - m.Q
    small, large = real_roots(dp)
    events = []
    for root, kind in ((small, EventKind.TANGENCY_MAX), (large, EventKind.TANGENCY_MIN)):
        j = 1 if root.sign_of(third) > 0 else 2
        events.append(CurveEvent(kind, j, root, evaluate(m.P, root.interval)))
    return events


def analyze_curve(m: PolyMap, limit_bits: int = REFINE_LIMIT_BITS) -> CurveEvents:
    """
    Find and classify every event of the real curve, sorted by abscissa.

    Args:
        m: Plane map with deg P = 3 (normalized first if needed)
        limit_bits: Precision at which abscissa ties are refused

    Returns:
        CurveEvents with the counts N, alpha, beta

    Raises:
        DegenerateCurve: when the curve is not nodal or events share an abscissa
    """
    m = normalize_bidegree(m)
    if sp.gcd(m.P.diff(T_SYM), m.Q.diff(T_SYM)).degree() > 0:
        raise DegenerateCurve("P' and Q' share a root (cusp or singular parametrization)")

    reducer = SymmetricReducer(m.P)
    g = reducer.node_polynomial(m.Q)
    if not is_squarefree(g):
        raise DegenerateCurve("node polynomial has a repeated root (non-nodal singularity)")

    node_events, beta = _node_events(m, reducer, g)
    events = node_events + _tangency_events(m)
    x_polys = {
        id(e): (reducer.half_sum(m.P) if e.kind in (EventKind.CROSSING, EventKind.SOLITARY)
                else m.P)
        for e in events
    }
    ordered = separate(events, lambda e, bits: evaluate(x_polys[id(e)], e.root.enclosure(bits)),
                       limit_bits)

    result = []
    for event, box in ordered:
        event.x = box
        event.parameters = _describe_parameters(event, reducer)
        result.append(event)

    n_cross = sum(1 for e in result if e.kind is EventKind.CROSSING)
    n_solitary = sum(1 for e in result if e.kind is EventKind.SOLITARY)
    traced = CurveEvents(m, result, n_cross, n_solitary, beta, g, reducer)
    logger.info(f"Analyzed curve b={m.b}: N={n_cross}, alpha={n_solitary}, beta={beta}")
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(json.dumps({'event': 'curve_analyzed', **traced.to_dict()}))
    return traced


def _describe_parameters(event: CurveEvent, reducer: SymmetricReducer) -> Tuple:
    u = event.root.as_float()
    if event.kind is EventKind.CROSSING:
        s, t = crossing_parameters(reducer, event.root, 64)
        return (float(s), float(t))
    if event.kind is EventKind.SOLITARY:
        d = float(reducer.discriminant().eval(Rational(u)))
        im = math.sqrt(max(-d, 0.0)) / 2
        return (f"{u / 2:.12g}-{im:.12g}i", f"{u / 2:.12g}+{im:.12g}i")
    return (u,)


def terminal_for(m: PolyMap) -> Terminal:
    positive = m.Q.LC() > 0
    if m.b % 3 == 2:
        return Terminal.DOWN if positive else Terminal.UP
    return Terminal.VEE if positive else Terminal.WEDGE


def extract_lscheme(m: PolyMap, traced: Optional[CurveEvents] = None) -> LScheme:
    """L-scheme realized by the curve: event symbols plus the terminal at infinity."""
    traced = traced or analyze_curve(m)
    return LScheme(tuple(e.symbol for e in traced.events), terminal_for(traced.polymap))


@dataclass(frozen=True)
class NodeReport:
    N: int
    alpha: int
    beta: int
    b: int

    @property
    def holds(self) -> bool:
        return self.N + self.alpha + 2 * self.beta == self.b - 1

    def to_dict(self) -> Dict:
        return {'N': self.N, 'alpha': self.alpha, 'beta': self.beta, 'b': self.b,
                'holds': self.holds}


def node_identity_check(m: PolyMap, traced: Optional[CurveEvents] = None) -> NodeReport:
    """
    N + alpha + 2 beta = b - 1, with beta counted from the non-real nodes.

    Raises:
        DegenerateCurve: if the identity fails
    """
    traced = traced or analyze_curve(m)
    report = NodeReport(traced.N, traced.alpha, traced.beta, traced.b)
    if not report.holds:
        raise DegenerateCurve("node count identity fails", report.to_dict())
    return report


def interior_lattice_points(b: int) -> int:
    """Integer points strictly inside the triangle (0,0), (0,3), (b,0)."""
    return sum(1 for i in range(1, b) for j in (1, 2) if 3 * i + b * j < 3 * b)


def lattice_point_formula(b: int) -> int:
    # Pick's theorem on the triangle; equals b - 1 when 3 does not divide b.
    return (2 * b - 1 - math.gcd(3, b)) // 2


def random_polymap(rng: random.Random, b: int, spread: int = 3) -> PolyMap:
    """Random map with small integer coefficients, deg P = 3, deg Q = b."""
    p = [rng.randint(-spread, spread) for _ in range(3)] + [rng.randint(1, 2)]
    q = [rng.randint(-spread, spread) for _ in range(b)]
    q.append(rng.choice([c for c in range(-spread, spread + 1) if c]))
    return PolyMap(poly_t(p), poly_t(q))


def to_json(traced: CurveEvents) -> str:
    return json.dumps(traced.to_dict(), indent=2)
