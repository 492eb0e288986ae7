"""Sturm-sequence root counting for univariate rational polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .polycore import UPoly

INF = float("inf")


def _divmod(f: UPoly, g: UPoly) -> tuple[UPoly, UPoly]:
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(f.coeffs)
    dg = len(g.coeffs) - 1
    lead = g.coeffs[-1]
    quot = [Fraction(0)] * max(len(rem) - dg, 0)
    for k in range(len(rem) - dg - 1, -1, -1):
        c = rem[k + dg] / lead
        quot[k] = c
        if c:
            for i, gc in enumerate(g.coeffs):
                rem[k + i] -= c * gc
    return UPoly(quot), UPoly(rem[:dg])


def primitive(f: UPoly) -> UPoly:
    """Positive rescaling of ``f`` to coprime integer coefficients."""
    if f.is_zero():
        return f
    den = lcm(*(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return UPoly(Fraction(v // g) for v in ints)


def poly_gcd(f: UPoly, g: UPoly) -> UPoly:
    while not g.is_zero():
        f, g = g, primitive(_divmod(f, g)[1])
    if f.is_zero():
        return f
    return f * (1 / f.lead())


def squarefree_part(f: UPoly) -> UPoly:
    """``f / gcd(f, f')`` normalized to be monic."""
    if f.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if f.degree() == 0:
        return UPoly([1])
    g = poly_gcd(f, f.derivative())
    q, r = _divmod(f, g)
    assert r.is_zero()
    return q * (1 / q.lead())


@dataclass(frozen=True)
class SturmChain:
    polys: tuple[UPoly, ...]

    @classmethod
    def build(cls, f: UPoly) -> "SturmChain":
        f0 = primitive(squarefree_part(f))
        chain = [f0]
        if f0.degree() > 0:
            chain.append(primitive(f0.derivative()))
            while True:
                r = _divmod(chain[-2], chain[-1])[1]
                if r.is_zero():
                    break
                chain.append(primitive(-r))
        return cls(tuple(chain))

    def variations(self, x) -> int:
        if x == INF or x == -INF:
            signs = []
            for p in self.polys:
                s = 1 if p.lead() > 0 else -1
                if x == -INF and p.degree() % 2:
                    s = -s
                signs.append(s)
        else:
            signs = [p(x) for p in self.polys]
            signs = [1 if v > 0 else -1 for v in signs if v]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(f: UPoly, lo=-INF, hi=INF, lo_closed: bool = False, hi_closed: bool = False) -> int:
    """Distinct real roots of ``f`` in the interval between ``lo`` and ``hi``.

    Endpoints are rationals or +-inf; infinite endpoints are always open.
    """
    if f.is_zero():
        raise ValueError("root count of the zero polynomial")
    if lo != -INF:
        lo = Fraction(lo)
    if hi != INF:
        hi = Fraction(hi)
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return 0
    chain = SturmChain.build(f)
    # with zero entries dropped, V(a) - V(b) counts roots in (a, b]
    n = chain.variations(lo) - chain.variations(hi)
    f0 = chain.polys[0]
    if hi != INF and not hi_closed and f0(hi) == 0:
        n -= 1
    if lo != -INF and lo_closed and f0(lo) == 0:
        n += 1
    return n


def is_real_rooted(f: UPoly) -> bool:
    if f.is_zero():
        return False
    if f.degree() == 0:
        return True
    g = squarefree_part(f)
    return count_real_roots(g) == g.degree()
