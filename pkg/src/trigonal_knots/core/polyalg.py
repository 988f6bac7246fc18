"""
Exact algebra for trigonal curves.

Certified arb ball enclosures, isolated real roots with exact signs,
and the symmetric reduction that turns a function of an unordered
parameter pair {s, t} on the curve P(s) = P(t), s != t, into a
univariate polynomial in u = s + t.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import sympy as sp
from flint import arb, arb_poly, ctx, fmpq
from sympy import Poly, Rational

from trigonal_knots.core.errors import DegenerateCurve

T_SYM = sp.Symbol('t')
U_SYM = sp.Symbol('u')
V_SYM = sp.Symbol('v')

Item = TypeVar('Item')

# Extra arb precision over the requested enclosure width
GUARD_BITS = 32

# Isolating width below double precision, for float output
FLOAT_BITS = 60


def to_fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def to_rational(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def poly_t(coeffs: Sequence) -> Poly:
    """Polynomial in t from coefficients listed low to high."""
    expr = sum(Rational(c) * T_SYM ** k for k, c in enumerate(coeffs))
    return Poly(expr, T_SYM, domain='QQ')


def coefficients_low_to_high(f: Poly) -> List[Fraction]:
    return [to_fraction(c) for c in reversed(f.all_coeffs())]


# Ball arithmetic

@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    """Raise the arb working precision to bits plus guard bits inside the block."""
    saved = ctx.prec
    ctx.prec = max(saved, bits + GUARD_BITS)
    try:
        yield
    finally:
        ctx.prec = saved


def to_fmpq(value) -> fmpq:
    value = value if isinstance(value, Fraction) else to_fraction(value)
    return fmpq(value.numerator, value.denominator)


def ball(lo, hi=None) -> arb:
    """An arb ball at the current precision containing [lo, hi]."""
    low = arb(to_fmpq(lo))
    if hi is None or hi == lo:
        return low
    return low.union(arb(to_fmpq(hi)))


def sign(x: arb) -> Optional[int]:
    """+1 or -1 when the ball excludes zero, else None."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return None


def evaluate(f: Poly, at: arb) -> arb:
    return arb_poly([arb(to_fmpq(c)) for c in coefficients_low_to_high(f)])(at)


# Isolated real roots

class RealRoot:
    """
    A real root of a squarefree rational polynomial with an isolating interval.

    The interval is narrowed in place by refine(); lo == hi marks an exact
    rational root.
    """

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction):
        self.poly = poly
        self.lo = lo
        self.hi = hi

    def __repr__(self) -> str:
        return f"RealRoot([{float(self.lo):.6g}, {float(self.hi):.6g}])"

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def interval(self) -> arb:
        return ball(self.lo, self.hi)

    def refine(self, width: Fraction) -> arb:
        if not self.is_exact and self.hi - self.lo > width:
            lo, hi = self.poly.refine_root(
                to_rational(self.lo), to_rational(self.hi), eps=to_rational(width)
            )
            self.lo, self.hi = to_fraction(lo), to_fraction(hi)
        return self.interval

    def enclosure(self, bits: int) -> arb:
        """Ball of radius about 2^-bits around the root."""
        with working_precision(bits):
            return self.refine(Fraction(1, 1 << bits))

    def sign_of(self, f: Poly) -> int:
        """
        Exact sign of f at this root.

        Raises:
            DegenerateCurve: when f vanishes at the root
        """
        if f.is_zero:
            raise DegenerateCurve("sign requested of the zero polynomial")
        if self.is_exact:
            value = f.eval(to_rational(self.lo))
            if value == 0:
                raise DegenerateCurve("polynomial vanishes at an exact root")
            return 1 if value > 0 else -1
        common = sp.gcd(self.poly, f)
        if common.degree() > 0 and common.count_roots(to_rational(self.lo), to_rational(self.hi)):
            raise DegenerateCurve("polynomial vanishes at an algebraic root")
        if f.degree() <= 0:
            return 1 if f.LC() > 0 else -1
        width = self.hi - self.lo
        while f.count_roots(to_rational(self.lo), to_rational(self.hi)):
            width /= 16
            self.refine(width)
            if self.is_exact:
                return self.sign_of(f)
        value = f.eval(to_rational(self.lo))
        return 1 if value > 0 else -1

    def as_float(self) -> float:
        self.refine(Fraction(1, 1 << FLOAT_BITS))
        return float((self.lo + self.hi) / 2)


def real_roots(f: Poly) -> List[RealRoot]:
    """Isolated real roots of a squarefree polynomial, in increasing order."""
    if f.degree() <= 0:
        return []
    roots = []
    for (lo, hi), multiplicity in f.intervals():
        if multiplicity != 1:
            raise DegenerateCurve(f"repeated root of {f.as_expr()}")
        roots.append(RealRoot(f, to_fraction(lo), to_fraction(hi)))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def is_squarefree(f: Poly) -> bool:
    return f.degree() <= 0 or sp.gcd(f, f.diff()).degree() == 0


def separate(items: Sequence[Item], enclose: Callable[[Item, int], arb],
             limit_bits: int, start_bits: int = 8) -> List[Tuple[Item, arb]]:
    """
    Order items by certified enclosures of their values.

    Args:
        items: Objects to order
        enclose: Returns an enclosure of an item's value at the given precision
        limit_bits: Precision at which overlapping enclosures count as a tie

    Raises:
        DegenerateCurve: when two values cannot be separated within the limit
    """
    bits = start_bits
    while True:
        with working_precision(bits):
            boxes = sorted(((item, enclose(item, bits)) for item in items),
                           key=lambda p: p[1].lower())
        clash = next(
            (i for i in range(len(boxes) - 1) if not boxes[i][1] < boxes[i + 1][1]),
            None,
        )
        if clash is None:
            return boxes
        if bits >= limit_bits:
            raise DegenerateCurve(
                "coincident values within certified precision",
                {'near': float(boxes[clash][1].mid()), 'bits': bits},
            )
        bits = min(2 * bits, limit_bits)


# Symmetric reduction on the curve P(s) = P(t)

class SymmetricReducer:
    """
    Univariate reduction for pairs {s, t} with P(s) = P(t), s != t, deg P = 3.

    On that locus v = st is the polynomial u^2 + (p2 u + p1) / p3 of u = s + t,
    so every symmetric polynomial in s, t becomes a polynomial in u.
    """

    def __init__(self, p: Poly):
        if p.degree() != 3:
            raise ValueError("symmetric reduction needs a cubic")
        p0, p1, p2, p3 = [Rational(c) for c in reversed(p.all_coeffs())]
        self.p = p
        self.v_expr = U_SYM ** 2 + (p2 * U_SYM + p1) / p3
        self.third_offset = -p2 / p3
        self._power_sums = [Rational(2), U_SYM]
        self._complete = [Rational(1), U_SYM]

    def _grow(self, table: List, k: int) -> None:
        while len(table) <= k:
            m = len(table)
            table.append(sp.expand(U_SYM * table[m - 1] - self.v_expr * table[m - 2]))

    def power_sum(self, k: int):
        """s^k + t^k as an expression in u."""
        self._grow(self._power_sums, k)
        return self._power_sums[k]

    def complete(self, m: int):
        """sum_{i+j=m} s^i t^j as an expression in u (m >= 0)."""
        self._grow(self._complete, m)
        return self._complete[m]

    def _as_poly(self, expr) -> Poly:
        return Poly(sp.expand(expr), U_SYM, domain='QQ')

    def half_sum(self, f: Poly) -> Poly:
        """(f(s) + f(t)) / 2 as a polynomial in u."""
        terms = [Rational(c) * self.power_sum(k) for k, c in enumerate(reversed(f.all_coeffs()))]
        return self._as_poly(sum(terms, Rational(0)) / 2)

    def divided_difference(self, f: Poly) -> Poly:
        """(f(t) - f(s)) / (t - s) as a polynomial in u."""
        terms = [
            Rational(c) * self.complete(k - 1)
            for k, c in enumerate(reversed(f.all_coeffs())) if k >= 1
        ]
        return self._as_poly(sum(terms, Rational(0)))

    def discriminant(self) -> Poly:
        """(t - s)^2 = u^2 - 4 v as a polynomial in u."""
        return self._as_poly(U_SYM ** 2 - 4 * self.v_expr)

    def third_point(self, f: Poly, shift_expr) -> Poly:
        """f evaluated at the third fiber parameter -p2/p3 - shift_expr, in u."""
        return self._as_poly(f.as_expr().subs(T_SYM, self.third_offset - shift_expr))

    def node_polynomial(self, q: Poly) -> Poly:
        """Monic polynomial in u whose roots are the nodes (real and complex) of (P, q)."""
        g = self.divided_difference(q)
        if g.is_zero:
            raise DegenerateCurve("the map is not injective on a dense set")
        return g.monic()


def compose_in_t(f: Poly, inner_expr) -> Poly:
    """f(inner(t)) as a polynomial in t."""
    return Poly(sp.expand(f.as_expr().subs(T_SYM, inner_expr)), T_SYM, domain='QQ')


def reduce_mod(f: Poly, modulus: Poly) -> Poly:
    return f.rem(modulus)
