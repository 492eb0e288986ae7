"""Verdicts on real zero, stability and nonnegativity questions.

Exact criteria are used where they exist (quadratics, sums of squares,
rigid convexity along a ray); everything else is a seeded semidecision over
exact line probes, so a ``Refuted`` verdict is always a proof while
``Probable`` only reports that no counterexample was found.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Mapping, Sequence

from . import linalg
from .linalg import Matrix, is_psd, negative_direction
from .polycore import (
    Polynomial,
    evaluate,
    format_poly,
    from_json,
    parse,
    partial_derivative,
    restrict_line,
)
from .realroot import count_real_roots, is_real_rooted

DATA_DIR = Path(__file__).parent / "data"


class Status(IntEnum):
    REFUTED = 0
    UNKNOWN = 1
    PROBABLE = 2
    CERTIFIED = 3

    def __str__(self):
        return self.name.capitalize()


@dataclass
class Verdict:
    status: Status
    witness: dict | None = None
    samples_used: int = 0
    reason: str = ""
    notes: list[str] = field(default_factory=list)
    children: list["Verdict"] = field(default_factory=list)
    label: str = ""

    def to_dict(self, _seen=None) -> dict:
        _seen = set() if _seen is None else _seen
        out = {"status": str(self.status), "label": self.label, "reason": self.reason,
               "samples_used": self.samples_used}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.children:
            kids = []
            for c in self.children:
                if id(c) in _seen:
                    kids.append({"status": str(c.status), "label": c.label, "ref": True})
                else:
                    _seen.add(id(c))
                    kids.append(c.to_dict(_seen))
            out["children"] = kids
        return out

    def walk(self):
        seen = set()
        stack = [self]
        while stack:
            v = stack.pop()
            if id(v) in seen:
                continue
            seen.add(id(v))
            yield v
            stack.extend(reversed(v.children))


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Polynomial):
        return format_poly(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# sampling


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-100, 100), rng.randint(1, 10))


def random_direction(rng: random.Random, n: int) -> list[Fraction]:
    while True:
        v = [random_rational(rng) for _ in range(n)]
        if any(v):
            return v


def random_positive(rng: random.Random, n: int) -> list[Fraction]:
    return [max(abs(random_rational(rng)), Fraction(1, 100)) for _ in range(n)]


def _unit(n, i):
    return [Fraction(int(k == i)) for k in range(n)]


# ---------------------------------------------------------------------------
# quadratics


def quadratic_blocks(p: Polynomial, vars: Sequence[str] | None = None) -> tuple[Matrix, list[Fraction], Fraction]:
    """Write ``p = c + b^T v + v^T A v`` with symmetric ``A``; returns (A, b, c)."""
    if p.degree() > 2:
        raise ValueError("polynomial has degree above 2")
    vars = tuple(vars) if vars is not None else p.vars
    q = p.with_vars(vars)
    n = len(vars)
    A = linalg.zeros(n, n)
    b = [Fraction(0)] * n
    for mono, c in q.terms.items():
        idx = [i for i, e in enumerate(mono) for _ in range(e)]
        if len(idx) == 1:
            b[idx[0]] += c
        elif len(idx) == 2:
            i, j = idx
            if i == j:
                A[i][i] += c
            else:
                A[i][j] += c / 2
                A[j][i] += c / 2
    return A, b, q.constant_term()


def discriminant_matrix(A: Matrix, b: Sequence[Fraction]) -> Matrix:
    n = len(b)
    return [[b[i] * b[j] - 4 * A[i][j] for j in range(n)] for i in range(n)]


def quadratic_real_zero(p: Polynomial) -> Verdict:
    """Exact real zero test for polynomials of degree at most 2."""
    c0 = p.constant_term()
    if c0 == 0:
        raise ValueError("p vanishes at the origin")
    if p.degree() > 2:
        raise ValueError("quadratic test needs degree at most 2")
    A, b, _ = quadratic_blocks(p * (1 / c0))
    D = discriminant_matrix(A, b)
    if is_psd(D):
        return Verdict(Status.CERTIFIED, reason="discriminant matrix b b^T - 4A is PSD",
                       label="quadratic real zero")
    a = negative_direction(D)
    return Verdict(Status.REFUTED, witness={"direction": a, "line": restrict_line(p, a)},
                   reason="discriminant quadratic form negative along direction",
                   label="quadratic real zero")


# ---------------------------------------------------------------------------
# line probes


def real_zero_sample(p: Polynomial, n: int = 500, seed: int = 42) -> Verdict:
    """Probe ``t -> p(t a)`` for real-rootedness along ``n`` directions.

    The first probes are the coordinate directions and the all-ones vector,
    the remaining ones are seeded random rationals.
    """
    k = len(p.vars)
    if p.constant_term() == 0:
        return Verdict(Status.REFUTED, witness={"reason": "vanishes at origin"},
                       reason="p(0) = 0", label="real zero (sampled)")
    rng = random.Random(seed)
    fixed = [_unit(k, i) for i in range(k)] + ([[Fraction(1)] * k] if k > 1 else [])
    for idx in range(n):
        a = fixed[idx] if idx < len(fixed) else random_direction(rng, k)
        f = restrict_line(p, a)
        if not is_real_rooted(f):
            return Verdict(Status.REFUTED, witness={"direction": a, "line": f},
                           samples_used=idx + 1, reason="line restriction not real-rooted",
                           label="real zero (sampled)", notes=[f"seed={seed}"])
    return Verdict(Status.PROBABLE, samples_used=n, reason=f"{n} line probes real-rooted",
                   label="real zero (sampled)", notes=[f"seed={seed}"])


def stable_sample(p: Polynomial, n: int = 500, seed: int = 42) -> Verdict:
    """Probe ``t -> p(t a + b)`` with ``a`` strictly positive."""
    if p.is_zero():
        raise ValueError("the zero polynomial is not stable")
    k = len(p.vars)
    rng = random.Random(seed)
    for idx in range(n):
        a = random_positive(rng, k)
        b = [random_rational(rng) for _ in range(k)]
        f = restrict_line(p, a, b)
        if not is_real_rooted(f):
            return Verdict(Status.REFUTED, witness={"direction": a, "offset": b, "line": f},
                           samples_used=idx + 1, reason="line restriction not real-rooted",
                           label="stable (sampled)", notes=[f"seed={seed}"])
    return Verdict(Status.PROBABLE, samples_used=n, reason=f"{n} positive-direction probes real-rooted",
                   label="stable (sampled)", notes=[f"seed={seed}"])


def recheck(p: Polynomial, verdict: Verdict) -> bool:
    """Re-verify a Refuted verdict's witness exactly."""
    w = verdict.witness or {}
    if verdict.status != Status.REFUTED:
        return False
    if w.get("reason") == "vanishes at origin":
        return p.constant_term() == 0
    if "point" in w:
        return evaluate(p.with_vars(w.get("vars", p.vars)), w["point"]) < 0
    if "offset" in w:
        a, b = w["direction"], w["offset"]
        return all(x > 0 for x in a) and not is_real_rooted(restrict_line(p, a, b))
    if "direction" in w:
        return not is_real_rooted(restrict_line(p, w["direction"]))
    return False


# ---------------------------------------------------------------------------
# Rayleigh differences and sums of squares


def rayleigh(p: Polynomial, i: str, j: str) -> Polynomial:
    """``(d_i p)(d_j p) - p * d_i d_j p`` for multi-affine ``p``."""
    if not p.is_multi_affine():
        raise ValueError("Rayleigh difference needs a multi-affine polynomial")
    if i == j:
        raise ValueError("need two distinct variables")
    for v in (i, j):
        if v not in p.vars:
            p = p.with_vars(p.vars + (v,))
    pi = partial_derivative(p, i)
    pj = partial_derivative(p, j)
    pij = partial_derivative(pi, j)
    r = pi * pj - p * pij
    keep = tuple(v for v in p.vars if v not in (i, j))
    return r.with_vars(keep)


@dataclass(frozen=True)
class SosCertificate:
    squares: tuple[tuple[Fraction, Polynomial], ...]
    target: Polynomial | None = None

    def __post_init__(self):
        for w, _ in self.squares:
            if w <= 0:
                raise ValueError("certificate weights must be positive")

    def total(self) -> Polynomial:
        acc = Polynomial.zero()
        for w, q in self.squares:
            acc = acc + (q * q) * w
        return acc

    def to_json(self) -> dict:
        out = {"squares": [{"w": str(w), "q": format_poly(q)} for w, q in self.squares]}
        if self.target is not None:
            out["target"] = format_poly(self.target)
        return out

    @classmethod
    def from_json(cls, obj) -> "SosCertificate":
        if isinstance(obj, (str, Path)) and Path(obj).exists():
            obj = json.loads(Path(obj).read_text())
        elif isinstance(obj, str):
            obj = json.loads(obj)
        squares = tuple((Fraction(str(s["w"])), _poly_field(s["q"])) for s in obj["squares"])
        target = _poly_field(obj["target"]) if obj.get("target") is not None else None
        return cls(squares, target)


def _poly_field(v) -> Polynomial:
    return parse(v) if isinstance(v, str) else from_json(v)


def sos_difference(target: Polynomial, cert: SosCertificate) -> Polynomial:
    return target - cert.total()


def verify_sos(target: Polynomial, cert: SosCertificate) -> bool:
    return sos_difference(target, cert).is_zero()


def load_certificate(name: str) -> SosCertificate:
    """Load one of the shipped certificates (``rayleigh_pM1``, ``rayleigh_qM2``)."""
    return SosCertificate.from_json(json.loads((DATA_DIR / f"{name}.json").read_text()))


def _even_nonneg(p: Polynomial) -> bool:
    return all(c > 0 and all(e % 2 == 0 for e in m) for m, c in p.terms.items())


def global_nonneg(p: Polynomial, cert: SosCertificate | None = None, n: int = 500, seed: int = 42) -> Verdict:
    """Nonnegativity on all of R^k: certificate, even-square shortcut, or search."""
    if cert is not None and verify_sos(p, cert):
        return Verdict(Status.CERTIFIED, reason="sum of squares certificate verified", label="nonnegative")
    if _even_nonneg(p):
        return Verdict(Status.CERTIFIED, reason="all terms are even monomials with positive coefficients",
                       label="nonnegative")
    k = len(p.vars)
    rng = random.Random(seed)
    signs = product((1, -1), repeat=k) if k <= 10 else iter(())
    for idx in range(n):
        s = next(signs, None)
        pt = [Fraction(v) for v in s] if s is not None else [random_rational(rng) for _ in range(k)]
        if evaluate(p, pt) < 0:
            return Verdict(Status.REFUTED, witness={"point": pt, "vars": list(p.vars)}, samples_used=idx + 1,
                           reason="negative value found", label="nonnegative", notes=[f"seed={seed}"])
    return Verdict(Status.UNKNOWN, samples_used=n, reason=f"no negative value in {n} samples",
                   label="nonnegative", notes=[f"seed={seed}"])


# ---------------------------------------------------------------------------
# Wagner-Wei recursion

ZERO_CHILD_NOTE = "zero polynomial counted as stable (Wagner-Wei convention)"
OCCURRING_NOTE = "criterion applied to occurring variables only"


def wagner_wei_stable(
    p: Polynomial,
    certs: Mapping[str, SosCertificate] | None = None,
    n: int = 200,
    seed: int = 42,
    small_matroid_rule: bool = True,
) -> Verdict:
    """Recursive stability check for multi-affine ``p`` with nonnegative
    coefficients.

    Each node needs its derivatives and zero-restrictions in every occurring
    variable to be stable, plus one globally nonnegative Rayleigh difference.
    ``certs`` maps node ids (``root``, ``root/d:x1``, ``root/z:x2``, ...) to
    SOS certificates for that node's Rayleigh obligation.  With
    ``small_matroid_rule`` a node that is a bases generating polynomial of a
    matroid on at most six elements is a leaf: such polynomials have the
    half-plane property.  The overall status is the minimum over the tree.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if not p.is_multi_affine():
        raise ValueError("polynomial is not multi-affine")
    if any(c < 0 for c in p.coefficients()):
        raise ValueError("polynomial has a negative coefficient")
    certs = dict(certs or {})
    memo: dict[Polynomial, Verdict] = {}

    def node(q: Polynomial, path: str) -> Verdict:
        if q in memo:
            return memo[q]
        occ = q.occurring_vars()
        q = q.with_vars(occ)
        label = f"{path}: {format_poly(q)}"
        if q.is_zero():
            v = Verdict(Status.CERTIFIED, reason="zero polynomial", notes=[ZERO_CHILD_NOTE], label=label)
        elif len(occ) <= 1:
            v = Verdict(Status.CERTIFIED, reason="at most one variable, nonnegative coefficients", label=label)
        elif small_matroid_rule and len(occ) <= 6 and _is_small_matroid_poly(q):
            v = Verdict(Status.CERTIFIED, reason="bases generating polynomial of a matroid on at most 6 elements",
                        label=label)
        else:
            v = Verdict(Status.UNKNOWN, label=label, notes=[OCCURRING_NOTE])
            memo[q] = v
            kids = []
            for x in occ:
                kids.append(node(partial_derivative(q, x), f"{path}/d:{x}"))
                kids.append(node(q.subs({x: 0}), f"{path}/z:{x}"))
            obligation = _rayleigh_obligation(q, certs.get(path), n, seed, path)
            v.children = [obligation] + kids
            v.status = min(c.status for c in v.children)
            v.reason = "children stable and a Rayleigh difference nonnegative"
            if any(ZERO_CHILD_NOTE in c.notes for c in kids):
                v.notes.append(ZERO_CHILD_NOTE)
        memo[q] = v
        return v

    root = node(p, "root")
    return root


def _rayleigh_obligation(q: Polynomial, cert, n, seed, path) -> Verdict:
    best = None
    for i, j in combinations(q.vars, 2):
        R = rayleigh(q, i, j)
        v = global_nonneg(R, cert, n, seed)
        v.label = f"{path}: Rayleigh({i},{j}) = {format_poly(R)}"
        if best is None or v.status > best.status:
            best = v
        if v.status == Status.CERTIFIED:
            break
    return best


def _is_small_matroid_poly(q: Polynomial) -> bool:
    from .matroids import MatroidError, from_bases

    coeffs = set(q.coefficients())
    if len(coeffs) != 1 or not q.is_homogeneous():
        return False
    try:
        from_bases(q.vars, [frozenset(v for v, e in zip(q.vars, m) if e) for m in q.terms])
    except MatroidError:
        return False
    return True


# ---------------------------------------------------------------------------
# rigid convexity


def rigidly_convex_contains(p: Polynomial, a: Sequence) -> bool:
    """Whether ``p(t a)`` has no root for ``t`` in the open interval (0, 1)."""
    if p.constant_term() == 0:
        raise ValueError("p vanishes at the origin")
    return count_real_roots(restrict_line(p, a), 0, 1) == 0


def orthant_in_rigid_set(p: Polynomial) -> bool:
    """Sufficient test that the nonnegative orthant lies in C(p).

    ``False`` means undecided, not refuted.
    """
    if p.constant_term() <= 0:
        raise ValueError("needs p(0) > 0")
    return all(c >= 0 for c in p.coefficients())


# ---------------------------------------------------------------------------
# determinantal polynomials


def det_polynomial(mats: Sequence[tuple[str, Matrix]]) -> Polynomial:
    """Exact expansion of ``det(I + sum_v v * M_v)``."""
    if not mats:
        return Polynomial.constant(1)
    names = tuple(name for name, _ in mats)
    d = len(mats[0][1])
    for name, M in mats:
        if len(M) != d or any(len(row) != d for row in M):
            raise ValueError(f"matrix for {name} is not {d}x{d}")
        if not linalg.is_symmetric(M):
            raise ValueError(f"matrix for {name} is not symmetric")
    units = [tuple(int(k == i) for k in range(len(names))) for i in range(len(names))]
    zero = (0,) * len(names)
    entries = []
    for r in range(d):
        row = []
        for c in range(d):
            terms = {zero: int(r == c)}
            for u, (_, M) in zip(units, mats):
                terms[u] = M[r][c]
            row.append(Polynomial(names, terms))
        entries.append(row)
    return linalg.symbolic_det(entries).with_vars(names)
