"""Constructive amalgamation of real zero polynomials.

Three exact constructions are provided: the derivative-sum amalgam for
polynomials without shared variables, the PSD-completion amalgam for
quadratics, and gluing of simultaneous determinantal representations.  A
Monte Carlo estimator of the orthogonal averaging integral is included to
cross-check the derivative-sum formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

import numpy as np

from . import linalg
from .certify import (
    Status,
    det_polynomial,
    discriminant_matrix,
    quadratic_blocks,
    quadratic_real_zero,
)
from .linalg import InconsistentSystem, Matrix, is_psd
from .polycore import Polynomial, SizeGuardError, homogenize, partial_derivative


class IncompatibleError(ValueError):
    """The two inputs disagree where they should coincide."""

    def __init__(self, message: str, difference: Polynomial | None = None):
        super().__init__(message)
        self.difference = difference


class PreconditionError(ValueError):
    pass


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "_"
    return name


def _zero_out(p: Polynomial, names) -> Polynomial:
    return p.subs({v: 0 for v in names if v in p.vars})


@dataclass
class AmalgamationProblem:
    x: tuple[str, ...]
    y: tuple[str, ...]
    z: tuple[str, ...]
    p: Polynomial
    q: Polynomial

    def __post_init__(self):
        self.x, self.y, self.z = tuple(self.x), tuple(self.y), tuple(self.z)
        names = self.x + self.y + self.z
        if len(set(names)) != len(names):
            raise PreconditionError("variable blocks overlap")
        self.p = self.p.with_vars(self.x + self.y)
        self.q = self.q.with_vars(self.x + self.z)

    def compatibility_defect(self) -> Polynomial:
        """``p(x,0) - q(x,0)``; zero exactly when the problem is compatible."""
        return _zero_out(self.p, self.y) - _zero_out(self.q, self.z)

    def check(self):
        diff = self.compatibility_defect()
        if not diff.is_zero():
            raise IncompatibleError(f"p(x,0) != q(x,0); difference {diff}", diff)
        if self.p.constant_term() == 0:
            raise PreconditionError("p vanishes at the origin")

    def marginals_ok(self, r: Polynomial) -> bool:
        return _zero_out(r, self.z) == self.p and _zero_out(r, self.y) == self.q


# ---------------------------------------------------------------------------
# no shared variables


def derivative_sum(product: Polynomial, s: str, t: str, d: int) -> Polynomial:
    """``sum_{i+j=d} d_s^i d_t^j product``."""
    total = Polynomial.zero(product.vars)
    for i in range(d + 1):
        total = total + partial_derivative(partial_derivative(product, s, i), t, d - i)
    return total


def amalgamate_disjoint(p: Polynomial, q: Polynomial, d: int | None = None) -> Polynomial:
    """Degree-preserving amalgam of real zero ``p`` and ``q`` in disjoint
    variables.

    Homogenize both to degree ``d`` with fresh variables s and t, apply the
    derivative sum, check the result is a polynomial in s+t, then set s=1,
    t=0 and divide by d!.
    """
    shared = set(p.occurring_vars()) & set(q.occurring_vars())
    if shared:
        raise PreconditionError(f"shared variables {sorted(shared)}")
    p0, q0 = p.constant_term(), q.constant_term()
    if p0 == 0 or q0 == 0:
        raise PreconditionError("inputs must not vanish at the origin")
    if p0 != q0:
        raise IncompatibleError("constant terms differ", Polynomial.constant(p0 - q0))
    dmax = max(p.degree(), q.degree())
    d = dmax if d is None else d
    if d < dmax:
        raise PreconditionError(f"d={d} below the input degree {dmax}")
    pn, qn = p * (1 / p0), q * (1 / q0)
    taken = set(p.vars) | set(q.vars)
    s = _fresh("s", taken)
    t = _fresh("t", taken | {s})
    ph = homogenize(pn.with_vars(pn.occurring_vars()), d, s)
    qh = homogenize(qn.with_vars(qn.occurring_vars()), d, t)
    rt = derivative_sum(ph * qh, s, t, d)

    # rt must lie in R[s+t, y, z]: rebuild it from its t=0 slice
    g = rt.subs({t: 0})
    sum_st = Polynomial.variable(s, (s, t)) + Polynomial.variable(t, (s, t))
    if g.compose({s: sum_st}) != rt:
        raise AssertionError("derivative sum is not a polynomial in s+t")

    r = rt.subs({s: 1, t: 0}) * (p0 / factorial(d))
    out_vars = p.vars + tuple(v for v in q.vars if v not in p.vars)
    r = r.with_vars(out_vars)
    if _zero_out(r, q.vars) != p or _zero_out(r, p.vars) != q:
        raise AssertionError("marginal check failed")
    return r


# ---------------------------------------------------------------------------
# quadratics


@dataclass
class QuadraticCompletion:
    r: Polynomial
    P: Matrix
    Q: Matrix
    W: Matrix
    G: Matrix
    joint: Matrix


def _block(M: Matrix, rows: range, cols: range) -> Matrix:
    return [[M[i][j] for j in cols] for i in rows]


def quadratic_completion(prob: AmalgamationProblem) -> QuadraticCompletion:
    prob.check()
    p, q = prob.p, prob.q
    if p.degree() > 2 or q.degree() > 2:
        raise PreconditionError("quadratic amalgamation needs degree at most 2")
    c0 = p.constant_term()
    pn, qn = p * (1 / c0), q * (1 / c0)
    l, m, n = len(prob.x), len(prob.y), len(prob.z)
    Ap, bp, _ = quadratic_blocks(pn, prob.x + prob.y)
    Aq, bq, _ = quadratic_blocks(qn, prob.x + prob.z)
    P = discriminant_matrix(Ap, bp)
    Q = discriminant_matrix(Aq, bq)
    if not is_psd(P) or not is_psd(Q):
        raise PreconditionError("an input is not real zero (discriminant not PSD)")
    Pxx = _block(P, range(l), range(l))
    Pyx = _block(P, range(l, l + m), range(l))
    Qxz = _block(Q, range(l), range(l, l + n))
    if l:
        try:
            X = linalg.solve(Pxx, Qxz)
        except InconsistentSystem as exc:
            raise PreconditionError("shared block system inconsistent; Q is not PSD") from exc
        W = linalg.matmul(Pyx, X) if m and n else linalg.zeros(m, n)
    else:
        W = linalg.zeros(m, n)
    b, c = bp[l:], bq[l:]
    G = [[(b[i] * c[j] - W[i][j]) / 4 for j in range(n)] for i in range(m)]

    names = prob.x + prob.y + prob.z
    k = l + m + n
    A = linalg.zeros(k, k)
    for i in range(l + m):
        for j in range(l + m):
            A[i][j] = Ap[i][j]
    zi = list(range(l)) + list(range(l + m, k))
    for a, i in enumerate(zi):
        for bb, j in enumerate(zi):
            A[i][j] = Aq[a][bb]
    for i in range(m):
        for j in range(n):
            A[l + i][l + m + j] = G[i][j]
            A[l + m + j][l + i] = G[i][j]
    vec = bp[:l] + bp[l:] + bq[l:]
    joint = discriminant_matrix(A, vec)
    terms: dict[tuple, Fraction] = {(0,) * k: Fraction(1)}
    for i in range(k):
        e = [0] * k
        e[i] = 1
        terms[tuple(e)] = vec[i]
        for j in range(i, k):
            e = [0] * k
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + (A[i][j] if i == j else 2 * A[i][j])
    r = Polynomial(names, terms) * c0
    if not prob.marginals_ok(r):
        raise AssertionError("quadratic amalgam marginals differ from the inputs")
    if not is_psd(joint):
        raise AssertionError("completed discriminant is not PSD")
    return QuadraticCompletion(r, P, Q, W, G, joint)


def amalgamate_quadratic(prob: AmalgamationProblem) -> Polynomial:
    """Real zero amalgam of degree at most 2 for quadratic inputs."""
    prob.check()
    if max(prob.p.degree(), prob.q.degree()) <= 1:
        # linear amalgam; the completion would add a yz term
        return prob.p + prob.q - _zero_out(prob.p, prob.y)
    for name, f in (("p", prob.p), ("q", prob.q)):
        if quadratic_real_zero(f).status != Status.CERTIFIED:
            raise PreconditionError(f"{name} is not real zero")
    return quadratic_completion(prob).r


# ---------------------------------------------------------------------------
# determinantal


def amalgamate_determinantal(x_mats, y_mats, z_mats) -> Polynomial:
    """``det(I + sum x A + sum y B + sum z C)`` from named symmetric matrices."""
    mats = list(x_mats) + list(y_mats) + list(z_mats)
    dims = {len(M) for _, M in mats}
    if len(dims) > 1:
        raise PreconditionError("matrices have different sizes")
    return det_polynomial(mats)


def align_shared_numeric(A, B, A2, C):
    """Floating-point preprocessing for one shared variable: diagonalize the
    two shared matrices with sorted eigenvalues and conjugate the private
    matrices along.  The output is approximate and not used by exact code."""
    wa, Ua = np.linalg.eigh(np.asarray(A, dtype=float))
    wb, Ub = np.linalg.eigh(np.asarray(A2, dtype=float))
    if not np.allclose(wa, wb, atol=1e-9):
        raise PreconditionError("shared matrices have different spectra")
    Bn = Ua.T @ np.asarray(B, dtype=float) @ Ua
    Cn = Ub.T @ np.asarray(C, dtype=float) @ Ub
    return np.diag(wa), Bn, Cn


# ---------------------------------------------------------------------------
# averaging identities


def walsh_identity_check(a: Sequence, b: Sequence) -> bool:
    """Exact check that the derivative sum of prod(s+a_i) prod(t+b_j) equals
    the permanent-like sum over permutations of prod(s+t+a_i+b_sigma(i))."""
    d = len(a)
    if len(b) != d:
        raise ValueError("a and b need equal length")
    if d > 6:
        raise SizeGuardError("d > 6 is refused (factorial blow-up)")
    st = ("s", "t")
    s = Polynomial.variable("s", st)
    t = Polynomial.variable("t", st)
    left = Polynomial.constant(1, st)
    for ai in a:
        left = left * (s + Fraction(ai))
    for bj in b:
        left = left * (t + Fraction(bj))
    lhs = derivative_sum(left, "s", "t", d)
    rhs = Polynomial.zero(st)
    for sigma in permutations(range(d)):
        term = Polynomial.constant(1, st)
        for i in range(d):
            term = term * (s + t + Fraction(a[i]) + Fraction(b[sigma[i]]))
        rhs = rhs + term
    return lhs == rhs


def _perm_matrix(sigma) -> Matrix:
    d = len(sigma)
    return [[Fraction(int(sigma[i] == j)) for j in range(d)] for i in range(d)]


def permutation_sum(A: Matrix, D: Matrix, U: Matrix | None = None) -> Fraction:
    """``sum_P det(A + U^T P^T D P U)`` over permutation matrices P."""
    d = len(A)
    if d > 6:
        raise SizeGuardError("d > 6 is refused (factorial blow-up)")
    total = Fraction(0)
    for sigma in permutations(range(d)):
        P = _perm_matrix(sigma)
        M = linalg.matmul(linalg.matmul(linalg.transpose(P), D), P)
        if U is not None:
            M = linalg.matmul(linalg.matmul(linalg.transpose(U), M), U)
        total += linalg.det(linalg.add(A, M))
    return total


def permutation_average(A: Matrix, D: Matrix) -> Fraction:
    if any(D[i][j] for i in range(len(D)) for j in range(len(D)) if i != j):
        raise ValueError("D must be diagonal")
    return permutation_sum(A, D) / factorial(len(A))


# ---------------------------------------------------------------------------
# Monte Carlo over the orthogonal group


@dataclass
class FloatPolynomial:
    """Float coefficients; never compared by exact equality."""

    vars: tuple[str, ...]
    terms: dict[tuple[int, ...], float]

    def coefficient(self, mono) -> float:
        return self.terms.get(tuple(mono), 0.0)


@dataclass
class MonteCarloResult:
    mean: FloatPolynomial
    stderr: FloatPolynomial
    samples: int
    seed: int


def haar_orthogonal(rng: np.random.Generator, d: int, size: int) -> np.ndarray:
    """``size`` Haar-distributed d x d orthogonal matrices: QR of Gaussian
    matrices with the columns of Q signed so that R has positive diagonal."""
    G = rng.standard_normal((size, d, d))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diagonal(R, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    return Q * signs[:, None, :]


def _array_poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out[m] + ca * cb if m in out else ca * cb
    return out


def _array_det(entries, nvars: int) -> dict:
    """Laplace expansion of a matrix whose entries are dicts monomial -> array."""
    d = len(entries)
    memo: dict = {}
    one = {(0,) * nvars: 1.0}

    def minor(row, cols):
        if row == d:
            return one
        key = (row, cols)
        if key in memo:
            return memo[key]
        total: dict = {}
        sign = 1.0
        for c in range(d):
            if cols >> c & 1:
                prod = _array_poly_mul(entries[row][c], minor(row + 1, cols & ~(1 << c)))
                for m, v in prod.items():
                    total[m] = total[m] + sign * v if m in total else sign * v
                sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << d) - 1)


def mc_orthogonal_amalgam(y_mats, z_mats, N: int = 20000, seed: int = 42) -> MonteCarloResult:
    """Estimate the Haar average of det(I + sum y B + U^T (sum z C) U)
    coefficient by coefficient, with standard errors."""
    mats = list(y_mats) + list(z_mats)
    if not mats:
        raise ValueError("need at least one matrix")
    d = len(mats[0][1])
    if d > 5 or len(y_mats) > 2 or len(z_mats) > 2:
        raise SizeGuardError("size guard: d <= 5 and at most two matrices per block")
    names = tuple(n for n, _ in mats)
    k = len(names)
    rng = np.random.default_rng(seed)
    U = haar_orthogonal(rng, d, N)
    Bs = [np.asarray(M, dtype=float) for _, M in y_mats]
    Cs = [np.einsum("nji,jk,nkl->nil", U, np.asarray(M, dtype=float), U) for _, M in z_mats]
    zero = (0,) * k
    entries = []
    for r in range(d):
        row = []
        for c in range(d):
            e = {zero: np.full(N, float(r == c))}
            for idx, B in enumerate(Bs):
                mono = tuple(int(i == idx) for i in range(k))
                e[mono] = np.full(N, B[r, c])
            for jdx, C in enumerate(Cs):
                mono = tuple(int(i == len(Bs) + jdx) for i in range(k))
                e[mono] = C[:, r, c]
            row.append(e)
        entries.append(row)
    det = _array_det(entries, k)
    mean, err = {}, {}
    for m, v in det.items():
        v = np.broadcast_to(np.asarray(v, dtype=float), (N,))
        mean[m] = float(v.mean())
        err[m] = float(v.std(ddof=1) / np.sqrt(N)) if N > 1 else 0.0
    return MonteCarloResult(FloatPolynomial(names, mean), FloatPolynomial(names, err), N, seed)


def operator_formula(y_mats, z_mats) -> Polynomial:
    """Exact Haar average of det(I + sum y B + U^T (sum z C) U): the disjoint
    amalgam of the two determinantal marginals at degree d = matrix size."""
    d = len((list(y_mats) + list(z_mats))[0][1])
    p = det_polynomial(list(y_mats)) if y_mats else Polynomial.constant(1)
    q = det_polynomial(list(z_mats)) if z_mats else Polynomial.constant(1)
    return amalgamate_disjoint(p, q, d)


def mc_deviation(mc: MonteCarloResult, exact: Polynomial, floor: float = 1e-9) -> tuple[float, float]:
    """(max |mean - exact|, max |mean - exact| / max(stderr, floor)) over all
    monomials appearing on either side."""
    idx = [exact.vars.index(v) for v in mc.mean.vars]
    exact_terms = {tuple(m[i] for i in idx): float(c) for m, c in exact.terms.items()}
    monos = set(exact_terms) | set(mc.mean.terms)
    dev = z = 0.0
    for m in monos:
        diff = abs(mc.mean.coefficient(m) - exact_terms.get(m, 0.0))
        dev = max(dev, diff)
        z = max(z, diff / max(mc.stderr.coefficient(m), floor))
    return dev, z
