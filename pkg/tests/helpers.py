"""Shared strategies and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from hypothesis import strategies as st

from rzamalgam import Polynomial
from rzamalgam.linalg import as_matrix

VARS = ("x1", "x2", "x3")

small_fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def polynomials(draw, vars=VARS, max_deg=3, max_terms=5):
    k = len(vars)
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(k))
        terms[e] = draw(small_fracs)
    return Polynomial(vars, terms)


# ---------------------------------------------------------------------------
# bisection root isolator (mpmath + sympy, shares no code with the library)

_T = sympy.Symbol("t")


def _sympy_poly(coeffs):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), _T)


def _roots_sqf(g: sympy.Poly) -> list:
    deg = g.degree()
    if deg <= 0:
        return []
    cs = [mpmath.mpf(sympy.Rational(c).p) / sympy.Rational(c).q for c in g.all_coeffs()]
    if deg == 1:
        return [-cs[1] / cs[0]]
    crit = _roots_sqf(sympy.Poly(sympy.sqf_part(g.diff(_T).as_expr()), _T))
    bound = 1 + max(abs(c / cs[0]) for c in cs[1:])
    pts = [-bound] + sorted(crit) + [bound]
    f = lambda x: mpmath.polyval(cs, x)
    roots = []
    for a, b in zip(pts, pts[1:]):
        fa, fb = f(a), f(b)
        if fa == 0:
            roots.append(a)
            continue
        if fa * fb < 0:
            for _ in range(220):
                m = (a + b) / 2
                fm = f(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append((a + b) / 2)
    if f(pts[-1]) == 0:
        roots.append(pts[-1])
    return sorted(set(roots))


def bisection_roots(coeffs) -> list:
    """Distinct real roots of a rational polynomial (lowest degree first)."""
    with mpmath.workdps(60):
        g = _sympy_poly(coeffs)
        g = sympy.Poly(sympy.sqf_part(g.as_expr()), _T)
        return _roots_sqf(g)


def random_upoly(rng: random.Random, max_deg: int = 8) -> list[Fraction]:
    """Random polynomials that often have repeated and clustered roots."""
    kind = rng.random()
    if kind < 0.4:
        deg = rng.randint(1, max_deg)
        cs = [Fraction(rng.randint(-20, 20)) for _ in range(deg + 1)]
        if cs[-1] == 0:
            cs[-1] = Fraction(1)
        return cs
    cs = [Fraction(rng.randint(1, 5))]
    deg = 0
    while deg < rng.randint(1, max_deg):
        if rng.random() < 0.7:
            r = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
            f = [-r, Fraction(1)]
        else:
            f = [Fraction(rng.randint(1, 9)), Fraction(rng.randint(-3, 3)), Fraction(1)]
        if deg + len(f) - 1 > max_deg:
            break
        out = [Fraction(0)] * (len(cs) + len(f) - 1)
        for i, a in enumerate(cs):
            for j, b in enumerate(f):
                out[i + j] += a * b
        cs, deg = out, len(out) - 1
    return cs


# ---------------------------------------------------------------------------
# matrices


def random_symmetric(rng: random.Random, d: int, lo=-3, hi=3):
    M = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            M[i][j] = M[j][i] = Fraction(rng.randint(lo, hi), rng.randint(1, 2))
    return M


def random_psd(rng: random.Random, d: int, rank: int | None = None):
    k = rank if rank is not None else rng.randint(1, d)
    V = [[Fraction(rng.randint(-2, 2)) for _ in range(d)] for _ in range(k)]
    return [[sum((V[r][i] * V[r][j] for r in range(k)), Fraction(0)) for j in range(d)] for i in range(d)]


def random_gram(rng: random.Random, d: int):
    """Gram matrix V^T V, sometimes shifted by a multiple of -I to make it indefinite."""
    G = random_psd(rng, d)
    if rng.random() < 0.5:
        c = Fraction(rng.randint(0, 8), rng.randint(1, 4))
        G = [[G[i][j] - (c if i == j else 0) for j in range(d)] for i in range(d)]
    return G


def eigmin(M) -> float:
    return float(np.linalg.eigvalsh(np.array([[float(v) for v in row] for row in M])).min())


def mat(rows):
    return as_matrix(rows)
