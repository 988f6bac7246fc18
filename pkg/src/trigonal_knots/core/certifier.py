"""
Certificates for degree lower bounds.

Frobenius counting of monomial exponents, the reduction of the height
function z modulo polynomials in x and y, the linking-number search that
rules out small y-degrees for two-bridge knots, and crossing-number bounds.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import sympy as sp
from sympy import Poly, Rational

from trigonal_knots.core.curvetrace import PolyMap, analyze_curve
from trigonal_knots.core.errors import (
    AlternatingBoundRequiresD6,
    BranchCountViolation,
    NotCoprime,
    SingularSystem,
    UnsupportedDegree,
    WrongCrossingCount,
)
from trigonal_knots.core.lscheme import Kind, LScheme, SchemeSymbol
from trigonal_knots.core.polyalg import T_SYM
from trigonal_knots.core.scheme2braid import legal_terminals, scheme_link
from trigonal_knots.core.twobridge import (
    TORUS,
    DegreeTriple,
    KnotDiagram,
    TwoBridgeSpec,
    canonical_spec,
    crossing_number,
    diagram_from_curve,
)

logger = logging.getLogger(__name__)


# Frobenius counting

@dataclass(frozen=True)
class FrobeniusReport:
    a: int
    b: int
    representable: Tuple[int, ...]
    frobenius_representable: bool

    @property
    def count(self) -> int:
        return len(self.representable)

    @property
    def expected(self) -> int:
        return (self.a - 1) * (self.b - 1) // 2

    @property
    def holds(self) -> bool:
        return self.count == self.expected and not self.frobenius_representable

    def to_dict(self) -> Dict:
        return {
            'a': self.a,
            'b': self.b,
            'representable': list(self.representable),
            'count': self.count,
            'expected': self.expected,
            'frobenius_number': self.a * self.b - self.a - self.b,
            'frobenius_representable': self.frobenius_representable,
            'holds': self.holds,
        }


def _check_pair(a: int, b: int) -> None:
    if a < 2 or b < 2:
        raise UnsupportedDegree(f"degrees must be at least 2, got ({a},{b})")
    if math.gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a},{b}) = {math.gcd(a, b)}")


def frobenius_count(a: int, b: int) -> FrobeniusReport:
    """
    Enumerate n = alpha a + beta b <= ab - a - b - 1 with alpha <= b-2, beta <= a-2.

    Raises:
        NotCoprime: if gcd(a, b) != 1
    """
    _check_pair(a, b)
    limit = a * b - a - b - 1
    values = {
        alpha * a + beta * b
        for alpha in range(b - 1) for beta in range(a - 1)
        if alpha * a + beta * b <= limit
    }
    frobenius = a * b - a - b
    hit = any((frobenius - beta * b) % a == 0 for beta in range(frobenius // b + 1))
    return FrobeniusReport(a, b, tuple(sorted(values)), hit)


def frobenius_pairing(a: int, b: int) -> bool:
    """s(alpha, beta) + s(b-2-alpha, a-2-beta) = 2(2N-1) with N = (a-1)(b-1)/2."""
    _check_pair(a, b)
    total = 2 * ((a - 1) * (b - 1) - 1)
    for alpha, beta in itertools.product(range(b - 1), range(a - 1)):
        s = alpha * a + beta * b
        s_dual = (b - 2 - alpha) * a + (a - 2 - beta) * b
        if s + s_dual != total:
            return False
    return True


def monomial_exponents(a: int, b: int, N: int) -> List[Tuple[int, int]]:  # pylint: disable=invalid-name
    """(alpha, beta) with alpha a + beta b <= 2N - 2, by increasing weight."""
    bound = 2 * N - 2
    pairs = [
        (alpha, beta)
        for beta in range(bound // b + 1) for alpha in range((bound - beta * b) // a + 1)
    ]
    return sorted(pairs, key=lambda p: (p[0] * a + p[1] * b, p[1]))


# Height reduction

@dataclass
class ZReduction:
    x: Poly
    y: Poly
    z: Poly
    N: int
    monomials: List[Tuple[int, int]]
    coefficients: Dict[Tuple[int, int], Rational]
    h: Poly
    z_tilde: Poly
    signs: List[int]
    alternates: bool
    interpolates: bool
    degree_certificate: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            'x': str(self.x.as_expr()),
            'y': str(self.y.as_expr()),
            'z': str(self.z.as_expr()),
            'N': self.N,
            'monomials': [list(m) for m in self.monomials],
            'coefficients': {f"{a},{b}": str(c) for (a, b), c in self.coefficients.items()},
            'h': str(self.h.as_expr()),
            'z_tilde': str(self.z_tilde.as_expr()),
            'signs': self.signs,
            'alternates': self.alternates,
            'interpolates': self.interpolates,
            'degree_certificate': self.degree_certificate,
        }


def _residue_vector(f: Poly, g: Poly, size: int) -> List[Rational]:
    coeffs = list(reversed(f.rem(g).all_coeffs()))
    coeffs += [Rational(0)] * (size - len(coeffs))
    return coeffs[:size]


def z_reduce(x: Poly, y: Poly, z: Poly, diagram: Optional[KnotDiagram] = None) -> ZReduction:
    """
    Subtract from z the polynomial h(x, y) that agrees with the mean height at every crossing.

    Args:
        x, y, z: Polynomials in t; deg x = 3 and gcd(deg x, deg y) = 1
        diagram: Diagram of (x, y, z), computed when omitted

    Returns:
        ZReduction whose degree_certificate is 2N - 1 when z - h alternates
        in sign along the sorted crossing parameters

    Raises:
        NotCoprime: if the degrees share a factor
        WrongCrossingCount: unless all (a-1)(b-1)/2 nodes are real crossings
        SingularSystem: if the monomials do not separate the crossings
    """
    a, b = x.degree(), y.degree()
    _check_pair(a, b)
    if diagram is None:
        diagram = diagram_from_curve(analyze_curve(PolyMap(x, y)), z)
    traced = diagram.traced
    reducer, g = traced.reducer, traced.node_poly
    n_expected = (a - 1) * (b - 1) // 2
    if diagram.crossing_count != n_expected or g.degree() != n_expected:
        raise WrongCrossingCount(
            f"expected {n_expected} real crossings, found {diagram.crossing_count}",
            {'expected': n_expected, 'found': diagram.crossing_count, 'nodes': g.degree()},
        )

    N = n_expected
    p, q = traced.polymap.P, traced.polymap.Q
    x_u, y_u = reducer.half_sum(p), reducer.half_sum(q)
    monomials = monomial_exponents(a, b, N)
    columns = [_residue_vector(x_u ** i * y_u ** j, g, N) for i, j in monomials]
    system = sp.Matrix(N, N, lambda r, c: columns[c][r])
    rhs = sp.Matrix(_residue_vector(reducer.half_sum(z), g, N))
    if system.det() == 0:
        raise SingularSystem("monomials x^i y^j do not separate the crossings")
    solution = system.LUsolve(rhs)
    coefficients = {m: Rational(solution[k]) for k, m in enumerate(monomials)}

    h = Poly(sum((c * p.as_expr() ** i * q.as_expr() ** j
                  for (i, j), c in coefficients.items()), Rational(0)), T_SYM, domain='QQ')
    z_tilde = z - h
    interpolates = (reducer.divided_difference(h).rem(g).is_zero
                    and reducer.half_sum(z_tilde).rem(g).is_zero)

    d_tilde = reducer.divided_difference(z_tilde)
    roots = {c.label: e.root for c, e in zip(diagram.crossings, traced.crossings())}
    signs = []
    for label, side in diagram.ends:
        sign = roots[label].sign_of(d_tilde)
        signs.append(sign if side == 't' else -sign)
    alternates = all(s != t for s, t in zip(signs, signs[1:]))

    reduction = ZReduction(
        x=p, y=q, z=z, N=N, monomials=monomials, coefficients=coefficients, h=h,
        z_tilde=z_tilde, signs=signs, alternates=alternates, interpolates=interpolates,
        degree_certificate=2 * N - 1 if alternates and interpolates else None,
    )
    logger.info(f"z-reduction with N={N}: alternates={alternates}")
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(json.dumps({'event': 'z_reduced', 'N': N, 'signs': signs,
                                 'certificate': reduction.degree_certificate}))
    return reduction


# Linking-number obstruction

class Verdict(str, Enum):
    FEASIBLE = 'feasible'
    INFEASIBLE = 'infeasible'


@dataclass(frozen=True)
class Obstruction:
    spec: TwoBridgeSpec
    b: int
    verdict: Verdict
    tried: int
    witness: Optional[LScheme] = None
    reason: str = ''

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE

    def to_dict(self) -> Dict:
        return {
            'spec': self.spec.to_dict(),
            'b': self.b,
            'verdict': self.verdict.value,
            'tried': self.tried,
            'witness': self.witness.render() if self.witness else None,
            'reason': self.reason,
        }


def _crossing_block(spec: TwoBridgeSpec) -> Tuple[Tuple[SchemeSymbol, ...], SchemeSymbol]:
    if spec.kind == TORUS:
        return (SchemeSymbol(Kind.CROSSING, 1),) * spec.m, SchemeSymbol(Kind.MAX, 2)
    crossings = (SchemeSymbol(Kind.CROSSING, 1),) * spec.m + (SchemeSymbol(Kind.CROSSING, 2),) * spec.n
    return crossings, SchemeSymbol(Kind.MAX, 1)


def enumerate_candidate_schemes(spec: TwoBridgeSpec, b: int) -> Iterator[LScheme]:
    """
    Schemes o* <2 x1^m [x2^n] >j o* realizing the crossings of spec in degree b.

    Ordered by number of solitary nodes, terminal, prefix length, then indices.
    """
    spec = canonical_spec(spec)
    n = crossing_number(spec)
    spare = b - 1 - n
    crossings, closing = _crossing_block(spec)
    core = (SchemeSymbol(Kind.MIN, 2),) + crossings + (closing,)
    for alpha in range(0, spare + 1):
        if (spare - alpha) % 2:
            continue
        for terminal in legal_terminals(b):
            for split in range(alpha + 1):
                for indices in itertools.product((1, 2), repeat=alpha):
                    dots = [SchemeSymbol(Kind.SOLITARY, j) for j in indices]
                    yield LScheme(tuple(dots[:split]) + core + tuple(dots[split:]), terminal)


def _link_feasible(scheme: LScheme, b: int, n: int) -> bool:
    beta = (b - 1 - n - scheme.solitary_count) // 2
    link = scheme_link(scheme, b)
    if link.component_count != 3:
        return False
    return all(v >= 0 for v in link.lk.values()) and link.total_lk == beta


def feasible_witnesses(spec: TwoBridgeSpec, b: int) -> Iterator[LScheme]:
    n = crossing_number(spec)
    for scheme in enumerate_candidate_schemes(spec, b):
        if _link_feasible(scheme, b, n):
            yield scheme


def certify_lower_bound(spec: TwoBridgeSpec, b: int) -> Obstruction:
    """
    Search the candidate schemes of degree b for one whose braid closure is a
    3-component link with nonnegative linking numbers summing to beta.

    Infeasible at every b' below B certifies B as a lower bound for deg y.
    """
    spec = canonical_spec(spec)
    if b % 3 == 0:
        return Obstruction(spec, b, Verdict.INFEASIBLE, 0, reason="bidegree reducible")
    n = crossing_number(spec)
    tried = 0
    for scheme in enumerate_candidate_schemes(spec, b):
        tried += 1
        if _link_feasible(scheme, b, n):
            logger.info(f"{spec} at b={b}: feasible witness {scheme.render()!r}")
            return Obstruction(spec, b, Verdict.FEASIBLE, tried, scheme)
    reason = "no candidate schemes" if tried == 0 else "every candidate violates the linking constraints"
    logger.info(f"{spec} at b={b}: infeasible after {tried} candidates")
    return Obstruction(spec, b, Verdict.INFEASIBLE, tried, reason=reason)


def critical_degree(spec: TwoBridgeSpec) -> int:
    return (3 * crossing_number(spec) - 1) // 2


def expected_solitary_count(N: int) -> int:  # pylint: disable=invalid-name
    return (N - 3) // 2 if N % 2 else N // 2 - 2


def _has_adjacent_equal_dots(scheme: LScheme) -> bool:
    return any(
        s.kind is Kind.SOLITARY and s == t for s, t in zip(scheme.body, scheme.body[1:])
    )


@dataclass
class WitnessReport:
    spec: TwoBridgeSpec
    b: int
    witnesses: List[LScheme]
    expected_alpha: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return bool(self.witnesses) and all(self.checks.values())

    def to_dict(self) -> Dict:
        return {
            'spec': self.spec.to_dict(),
            'b': self.b,
            'witnesses': [w.render() for w in self.witnesses],
            'expected_alpha': self.expected_alpha,
            'checks': self.checks,
            'holds': self.holds,
        }


def witness_structure_report(spec: TwoBridgeSpec) -> WitnessReport:
    """All feasible witnesses at b = floor((3N-1)/2) and their solitary-node structure."""
    spec = canonical_spec(spec)
    n, b = crossing_number(spec), critical_degree(spec)
    witnesses = list(feasible_witnesses(spec, b))
    expected = expected_solitary_count(n)
    betas = [(b - 1 - n - w.solitary_count) // 2 for w in witnesses]
    report = WitnessReport(spec, b, witnesses, expected, {
        'beta_zero': all(beta == 0 for beta in betas),
        'alpha_matches': all(w.solitary_count == expected for w in witnesses),
        'no_adjacent_equal_dots': not any(_has_adjacent_equal_dots(w) for w in witnesses),
    })
    logger.info(f"{spec}: {len(witnesses)} witnesses at b={b}, checks {report.checks}")
    return report


@dataclass(frozen=True)
class ScanResult:
    spec: TwoBridgeSpec
    verdicts: Tuple[Obstruction, ...]

    @property
    def first_feasible(self) -> Optional[int]:
        return next((o.b for o in self.verdicts if o.feasible), None)

    def to_dict(self) -> Dict:
        return {
            'spec': self.spec.to_dict(),
            'first_feasible': self.first_feasible,
            'verdicts': [o.to_dict() for o in self.verdicts],
        }


def lower_bound_scan(spec: TwoBridgeSpec, max_b: Optional[int] = None) -> ScanResult:
    """Certify b = N+1, N+2, ... (skipping multiples of 3) until a witness appears."""
    spec = canonical_spec(spec)
    n = crossing_number(spec)
    max_b = max_b or 3 * n
    verdicts = []
    for b in range(n + 1, max_b + 1):
        if b % 3 == 0:
            continue
        verdict = certify_lower_bound(spec, b)
        verdicts.append(verdict)
        if verdict.feasible:
            break
    return ScanResult(spec, tuple(verdicts))


@dataclass(frozen=True)
class MonotonicityReport:
    """
    Extension of a witness at b to one at b + 3.

    b + 3 keeps the terminal class and adds three to b - 1 - N = alpha + 2 beta.
    A bare pair of solitary nodes would add two to alpha and leave an odd
    remainder for 2 beta, so the extension inserts one solitary node (beta
    grows by one) or, failing that, three (beta unchanged).
    """

    spec: TwoBridgeSpec
    b: int
    base: Obstruction
    extended: Optional[Obstruction]
    extension: Optional[LScheme] = None

    @property
    def holds(self) -> bool:
        return not self.base.feasible or self.extension is not None

    def to_dict(self) -> Dict:
        return {
            'spec': self.spec.to_dict(),
            'b': self.b,
            'base': self.base.to_dict(),
            'extended': self.extended.to_dict() if self.extended else None,
            'extension': self.extension.render() if self.extension else None,
            'holds': self.holds,
        }


def insert_solitary(scheme: LScheme, count: int) -> Iterator[LScheme]:
    """Distinct schemes with count solitary nodes inserted anywhere in the body."""
    frontier = {scheme}
    for _ in range(count):
        grown = set()
        for current in frontier:
            for pos, j in itertools.product(range(len(current.body) + 1), (1, 2)):
                body = current.body[:pos] + (SchemeSymbol(Kind.SOLITARY, j),) + current.body[pos:]
                try:
                    grown.add(LScheme(body, current.terminal))
                except BranchCountViolation:
                    continue
        frontier = grown
    yield from sorted(frontier, key=lambda s: s.render())


def extend_witness(spec: TwoBridgeSpec, witness: LScheme, b: int) -> Optional[LScheme]:
    """First feasible scheme at b + 3 containing witness as a subsequence."""
    n = crossing_number(spec)
    for count in (1, 3):
        for scheme in insert_solitary(witness, count):
            if _link_feasible(scheme, b + 3, n):
                return scheme
    return None


def monotonicity_check(spec: TwoBridgeSpec, b: int) -> MonotonicityReport:
    """A witness at b extends to one at b + 3 (same terminal class)."""
    spec = canonical_spec(spec)
    base = certify_lower_bound(spec, b)
    if not base.feasible:
        return MonotonicityReport(spec, b, base, None)
    extension = extend_witness(spec, base.witness, b)
    extended = certify_lower_bound(spec, b + 3)
    logger.info(f"{spec}: witness at b={b} extends to "
                f"{extension.render() if extension else None!r} at b={b + 3}")
    return MonotonicityReport(spec, b, base, extended, extension)


# Crossing-number bounds

def max_crossing_bound(d: int, alternating: bool = False) -> int:
    """
    Largest crossing number of a polynomial knot of degree d.

    Raises:
        AlternatingBoundRequiresD6: alternating bound asked for d <= 5
    """
    if d < 4:
        raise UnsupportedDegree(f"degree must be at least 4, got {d}")
    if alternating:
        if d <= 5:
            raise AlternatingBoundRequiresD6(f"the alternating bound needs d > 5, got {d}")
        return (d - 1) * (d - 4) // 2
    return (d - 2) * (d - 3) // 2


def alternating_c_bound(a: int, b: int) -> int:
    """deg z >= ab - a - b for an alternating diagram with (a-1)(b-1)/2 crossings."""
    _check_pair(a, b)
    return a * b - a - b


@dataclass(frozen=True)
class ThreeBridgeReport:
    degree: DegreeTriple
    crossings: int

    def to_dict(self) -> Dict:
        return {'degree': self.degree.to_dict(), 'crossings': self.crossings}


def three_bridge_degree(b: int) -> ThreeBridgeReport:
    """Lexicographic degree (5, b, 4b-5) of the harmonic knot H(5, b, 4b-5)."""
    if b <= 5:
        raise UnsupportedDegree(f"b must exceed 5, got {b}")
    if b % 5 == 0:
        raise NotCoprime(f"b = {b} is divisible by 5")
    c = alternating_c_bound(5, b)
    return ThreeBridgeReport(DegreeTriple(5, b, c), 2 * (b - 1))


def braid_summary(scheme: LScheme, b: int) -> Dict:
    """Braid word and closure data of a candidate, for reports."""
    link = scheme_link(scheme, b)
    return {'scheme': scheme.render(), 'b': b, 'link': link.to_dict()}
