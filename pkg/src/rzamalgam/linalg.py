"""Exact rational matrix helpers: determinants, characteristic polynomials,
PSD witnesses, consistent linear solves and symbolic determinants."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polycore import Polynomial

Matrix = list[list[Fraction]]


def as_matrix(rows) -> Matrix:
    return [[Fraction(str(v)) if isinstance(v, str) else Fraction(v) for v in row] for row in rows]


def is_symmetric(M: Matrix) -> bool:
    n = len(M)
    return all(len(row) == n for row in M) and all(M[i][j] == M[j][i] for i in range(n) for j in range(i))


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    if not B or not B[0]:
        return [[] for _ in A]
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A: Matrix, c) -> Matrix:
    return [[a * c for a in row] for row in A]


def det(M: Matrix) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    n = len(M)
    A = [list(row) for row in M]
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            result = -result
        result *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return result


def charpoly_berkowitz(M: Matrix) -> list[Fraction]:
    """Coefficients of det(t*I - M), lowest degree first (division-free)."""
    n = len(M)
    if n == 0:
        return [Fraction(1)]
    # Berkowitz: build the coefficient vector column by column
    vec = [Fraction(1), -M[0][0]]
    for r in range(1, n):
        R = M[r][:r]          # row r, columns < r
        C = [M[i][r] for i in range(r)]
        A = [row[:r] for row in M[:r]]
        a = M[r][r]
        # Toeplitz column: 1, -a, -R C, -R A C, -R A^2 C, ...
        col = [Fraction(1), -a]
        v = C
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), Fraction(0)))
            v = [sum((A[i][j] * v[j] for j in range(r)), Fraction(0)) for i in range(r)]
        new = []
        for i in range(r + 2):
            new.append(sum((col[i - j] * vec[j] for j in range(min(i, r) + 1) if i - j < len(col)), Fraction(0)))
        vec = new
    # vec holds det(tI - M) with highest degree first
    return list(reversed(vec))


def charpoly_faddeev(M: Matrix) -> list[Fraction]:
    """Faddeev-LeVerrier recurrence; same output convention as Berkowitz."""
    n = len(M)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = zeros(n, n)
    for k in range(1, n + 1):
        Mk = add(matmul(M, Mk), scale(identity(n), coeffs[n - k + 1]))
        AM = matmul(M, Mk)
        coeffs[n - k] = -sum((AM[i][i] for i in range(n)), Fraction(0)) / k
    return coeffs


def charpoly(M: Matrix) -> list[Fraction]:
    return charpoly_berkowitz(M) if len(M) <= 12 else charpoly_faddeev(M)


def is_psd(M: Matrix) -> bool:
    """Exact PSD test: every coefficient of det(t*I + M) is nonnegative.

    Valid because a symmetric matrix has real characteristic roots.
    """
    if not is_symmetric(M):
        raise ValueError("matrix is not symmetric")
    n = len(M)
    # det(tI + M) = (-1)^n det(-tI - M); coefficient of t^k is (-1)^(n-k) c_k
    cp = charpoly(M)
    return all(((-1) ** (n - k)) * c >= 0 for k, c in enumerate(cp))


def negative_direction(M: Matrix) -> list[Fraction] | None:
    """A rational vector v with v^T M v < 0, or None when M is PSD.

    Symmetric elimination: a positive pivot is eliminated by a Schur
    complement and the child witness is lifted back.
    """
    n = len(M)
    if n == 0:
        return None
    for i in range(n):
        if M[i][i] < 0:
            return [Fraction(int(k == i)) for k in range(n)]
    for i in range(n):
        if M[i][i] == 0:
            for j in range(n):
                if M[i][j] != 0:
                    v = [Fraction(0)] * n
                    v[j] = Fraction(1)
                    v[i] = -(abs(M[j][j]) + 1) / (2 * M[i][j])
                    return v
    # rows with zero diagonal are zero rows now; drop them and pad the witness
    keep = [i for i in range(n) if M[i][i] != 0]
    if len(keep) < n:
        w = negative_direction([[M[i][j] for j in keep] for i in keep])
        if w is None:
            return None
        v = [Fraction(0)] * n
        for i, x in zip(keep, w):
            v[i] = x
        return v
    # every diagonal entry is positive here, pivot on the first one
    p = M[0][0]
    m = M[0][1:]
    S = [[M[i][j] - m[i - 1] * m[j - 1] / p for j in range(1, n)] for i in range(1, n)]
    w = negative_direction(S)
    if w is None:
        return None
    return [-sum((a * b for a, b in zip(m, w)), Fraction(0)) / p] + w


def quadratic_form(M: Matrix, v: Sequence[Fraction]) -> Fraction:
    n = len(M)
    return sum((v[i] * M[i][j] * v[j] for i in range(n) for j in range(n)), Fraction(0))


class InconsistentSystem(ValueError):
    pass


def solve(A: Matrix, B: Matrix) -> Matrix:
    """Some exact solution X of A X = B (free variables set to 0).

    Raises :class:`InconsistentSystem` when no solution exists.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if any(aug[i][cols:]):
            raise InconsistentSystem("right-hand side is not in the column space")
    X = zeros(cols, k)
    for i, c in enumerate(pivots):
        X[c] = aug[i][cols:]
    return X


def symbolic_det(entries: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix of polynomials by Laplace expansion
    along rows, memoized on the set of columns still available."""
    n = len(entries)
    if n == 0:
        return Polynomial.constant(1)
    memo: dict[tuple[int, int], Polynomial] = {}

    def minor(row: int, cols: int) -> Polynomial:
        if row == n:
            return Polynomial.constant(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Polynomial.zero()
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                e = entries[row][c]
                if not e.is_zero():
                    sub = minor(row + 1, cols & ~(1 << c))
                    if not sub.is_zero():
                        total = total + e * sub if sign > 0 else total - e * sub
                sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)
