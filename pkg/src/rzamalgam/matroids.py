"""Matroids and delta-matroids on small labelled ground sets.

Subsets are stored as bitmasks over the ground tuple; the public API accepts
and returns label sets.  Canonical order on subsets is lexicographic on the
sorted index tuple, which makes every reported witness deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .polycore import Polynomial, SizeGuardError, support

MAX_GROUND = 16
MAX_AMALGAM_GROUND = 10


class MatroidError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _indices(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def _canon(m: int):
    return _indices(m)


def _mask(ground: Sequence[str], labels: Iterable[str] | int) -> int:
    if isinstance(labels, int):
        return labels
    index = {v: i for i, v in enumerate(ground)}
    m = 0
    for v in labels:
        if v not in index:
            raise MatroidError(f"{v!r} is not in the ground set")
        m |= 1 << index[v]
    return m


def _labels(ground: Sequence[str], m: int) -> frozenset[str]:
    return frozenset(ground[i] for i in _indices(m))


def _sorted_labels(ground: Sequence[str], m: int) -> list[str]:
    return [ground[i] for i in _indices(m)]


@dataclass(frozen=True)
class Matroid:
    ground: tuple[str, ...]
    bases: frozenset[int]
    _rank_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # equality by labels so ground order does not matter
    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return set(self.ground) == set(other.ground) and self.basis_sets() == other.basis_sets()

    def __hash__(self):
        return hash((frozenset(self.ground), frozenset(self.basis_sets())))

    def __repr__(self):
        return f"Matroid(ground={self.ground}, rank={self.rank()}, bases={len(self.bases)})"

    @property
    def full(self) -> int:
        return (1 << len(self.ground)) - 1

    def mask(self, labels) -> int:
        return _mask(self.ground, labels)

    def labels(self, m: int) -> frozenset[str]:
        return _labels(self.ground, m)

    def basis_sets(self) -> set[frozenset[str]]:
        return {self.labels(b) for b in self.bases}

    def sorted_bases(self) -> list[list[str]]:
        return [_sorted_labels(self.ground, b) for b in sorted(self.bases, key=_canon)]

    def rank(self, A=None) -> int:
        m = self.full if A is None else self.mask(A)
        cache = self._rank_cache
        if m not in cache:
            cache[m] = max(_popcount(b & m) for b in self.bases)
        return cache[m]

    def closure(self, A) -> frozenset[str]:
        m = self.mask(A)
        r = self.rank(m)
        out = m
        for i in range(len(self.ground)):
            if not m >> i & 1 and self.rank(m | 1 << i) == r:
                out |= 1 << i
        return self.labels(out)

    def closure_mask(self, m: int) -> int:
        return self.mask(self.closure(m))

    def flats(self) -> list[frozenset[str]]:
        found = {self.closure_mask(m) for m in range(self.full + 1)}
        return [self.labels(f) for f in sorted(found, key=lambda f: (_popcount(f), _canon(f)))]

    def is_independent(self, A) -> bool:
        m = self.mask(A)
        return self.rank(m) == _popcount(m)

    def loops(self) -> frozenset[str]:
        union = 0
        for b in self.bases:
            union |= b
        return self.labels(self.full & ~union)

    def coloops(self) -> frozenset[str]:
        inter = self.full
        for b in self.bases:
            inter &= b
        return self.labels(inter)

    def restriction(self, A) -> "Matroid":
        m = self.mask(A)
        sub = tuple(v for i, v in enumerate(self.ground) if m >> i & 1)
        r = self.rank(m)
        bases = {b & m for b in self.bases if _popcount(b & m) == r}
        return from_bases(sub, [_labels(self.ground, b) for b in bases])

    def contraction(self, A) -> "Matroid":
        m = self.mask(A)
        rest = tuple(v for i, v in enumerate(self.ground) if not m >> i & 1)
        r = self.rank(m)
        # bases of M/A: B \ A for bases B meeting A in a basis of M|A
        bases = {b & ~m for b in self.bases if _popcount(b & m) == r}
        return from_bases(rest, [_labels(self.ground, b) for b in bases])

    def rank_table(self) -> list[int]:
        return [self.rank(m) for m in range(self.full + 1)]

    def to_json(self) -> dict:
        return {"ground": list(self.ground), "bases": self.sorted_bases()}


def from_bases(ground: Sequence[str], bases: Iterable) -> Matroid:
    """Validated matroid from its bases.

    Raises :class:`MatroidError` naming the violated axiom; an exchange
    failure carries the witness ``(B, C, x)`` as label sets.
    """
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        raise MatroidError("duplicate ground labels")
    if len(ground) > MAX_GROUND:
        raise SizeGuardError(f"ground sets are limited to {MAX_GROUND} elements")
    masks = {_mask(ground, b) for b in bases}
    if not masks:
        raise MatroidError("a matroid needs at least one basis")
    if len({_popcount(b) for b in masks}) != 1:
        raise MatroidError("bases have different cardinalities")
    w = _exchange_failure(masks)
    if w is not None:
        B, C, x = w
        raise MatroidError(
            "basis exchange fails",
            witness=(_labels(ground, B), _labels(ground, C), ground[x]),
        )
    return Matroid(ground, frozenset(masks))


def _exchange_failure(masks: set[int]):
    order = sorted(masks, key=_canon)
    for B in order:
        for C in order:
            if B == C:
                continue
            for x in _indices(B & ~C):
                base = B & ~(1 << x)
                if not any((base | 1 << y) in masks for y in _indices(C & ~B)):
                    return B, C, x
    return None


def from_json(obj) -> Matroid:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return from_bases(obj["ground"], [frozenset(b) for b in obj["bases"]])


def uniform(k: int, ground: Sequence[str]) -> Matroid:
    ground = tuple(ground)
    return from_bases(ground, [frozenset(c) for c in combinations(ground, k)])


PT_SHARED = ("x1", "x2", "x3", "x4", "x5", "x6")


def poljak_turzik(which: str) -> Matroid:
    """The pair of rank-3 matroids on ``x1..x6`` plus ``y`` (M1) or ``z`` (M2)
    that share their restriction to ``x1..x6`` yet have no amalgam."""
    if which == "M1":
        extra = "y"
        lines = [{"y", "x1", "x4"}, {"y", "x3", "x6"}, {"y", "x2", "x5"}, {"x1", "x2", "x3"}, {"x4", "x5", "x6"}]
    elif which == "M2":
        extra = "z"
        lines = [{"z", "x1", "x4"}, {"z", "x2", "x5"}, {"x1", "x2", "x3"}, {"x4", "x5", "x6"}]
    else:
        raise ValueError("which must be 'M1' or 'M2'")
    ground = PT_SHARED + (extra,)
    bases = [frozenset(c) for c in combinations(ground, 3) if set(c) not in lines]
    return from_bases(ground, bases)


def bases_generating_poly(M: Matroid) -> Polynomial:
    n = len(M.ground)
    terms = {tuple(b >> i & 1 for i in range(n)): 1 for b in M.bases}
    return Polynomial(M.ground, terms)


def support_matroid(p: Polynomial) -> Matroid:
    """Matroid whose bases are the support of a multi-affine homogeneous ``p``."""
    if not p.is_homogeneous():
        raise MatroidError("polynomial is not homogeneous")
    return from_bases(p.vars, support(p))


def is_modular(M: Matroid) -> bool:
    flats = [M.mask(F) for F in M.flats()]
    for i, F in enumerate(flats):
        for G in flats[i:]:
            if M.rank(F & G) + M.rank(F | G) != M.rank(F) + M.rank(G):
                return False
    return True


# ---------------------------------------------------------------------------
# delta-matroids


@dataclass(frozen=True)
class DeltaMatroid:
    """A set system; construction does not validate the exchange property."""

    ground: tuple[str, ...]
    feasible: frozenset[int]

    @classmethod
    def from_sets(cls, ground: Sequence[str], sets: Iterable) -> "DeltaMatroid":
        ground = tuple(ground)
        if len(ground) > MAX_GROUND:
            raise SizeGuardError(f"ground sets are limited to {MAX_GROUND} elements")
        feasible = frozenset(_mask(ground, s) for s in sets)
        if not feasible:
            raise MatroidError("a delta-matroid needs a nonempty family")
        return cls(ground, feasible)

    def sets(self) -> list[list[str]]:
        return [_sorted_labels(self.ground, f) for f in sorted(self.feasible, key=lambda f: (_popcount(f), _canon(f)))]

    def to_json(self) -> dict:
        return {"ground": list(self.ground), "feasible": self.sets()}


def delta_from_json(obj) -> DeltaMatroid:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return DeltaMatroid.from_sets(obj["ground"], [frozenset(s) for s in obj["feasible"]])


@dataclass(frozen=True)
class ExchangeCheck:
    ok: bool
    witness: tuple[frozenset[str], frozenset[str], str] | None = None

    def __bool__(self):
        return self.ok


def exchange_options(D: DeltaMatroid, A, B, x: str) -> list[tuple[str, frozenset[str], bool]]:
    """Each candidate ``y`` in ``A ^ B`` with the set ``A ^ {x, y}`` and
    whether that set is feasible."""
    a, b = _mask(D.ground, A), _mask(D.ground, B)
    xi = D.ground.index(x)
    out = []
    for y in _indices(a ^ b):
        s = a ^ (1 << xi) ^ (1 << y) if y != xi else a ^ (1 << xi)
        out.append((D.ground[y], _labels(D.ground, s), s in D.feasible))
    return out


def is_delta_matroid(D: DeltaMatroid, pairs: Iterable | None = None) -> ExchangeCheck:
    """Check the symmetric exchange property.

    By default every ordered pair of feasible sets is examined in canonical
    order and the first failing ``(A, B, x)`` is returned.  ``pairs`` limits
    the check to the given ``(A, B)`` pairs, in the order given.
    """
    F = D.feasible
    if pairs is None:
        order = sorted(F, key=_canon)
        candidates = ((A, B) for A in order for B in order if A != B)
    else:
        candidates = ((_mask(D.ground, A), _mask(D.ground, B)) for A, B in pairs)
    for A, B in candidates:
        if A not in F or B not in F:
            raise MatroidError("pair is not in the family")
        diff = A ^ B
        for x in _indices(diff):
            if not any((A ^ (1 << x) ^ (1 << y) if y != x else A ^ (1 << x)) in F for y in _indices(diff)):
                return ExchangeCheck(False, (_labels(D.ground, A), _labels(D.ground, B), D.ground[x]))
    return ExchangeCheck(True)


def lower_matroid(D: DeltaMatroid) -> Matroid:
    k = min(_popcount(f) for f in D.feasible)
    return from_bases(D.ground, [f for f in D.feasible if _popcount(f) == k])


def upper_matroid(D: DeltaMatroid) -> Matroid:
    k = max(_popcount(f) for f in D.feasible)
    return from_bases(D.ground, [f for f in D.feasible if _popcount(f) == k])


# ---------------------------------------------------------------------------
# amalgam search


@dataclass
class AmalgamResult:
    kind: str  # "amalgam", "infeasible" or "incompatible"
    matroid: Matroid | None = None
    nodes: int = 0
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.kind == "amalgam"


class RankTable:
    """Integer function on all subsets of a labelled ground set."""

    def __init__(self, ground: Sequence[str], values: Sequence[int]):
        self.ground = tuple(ground)
        self.values = list(values)
        if len(self.values) != 1 << len(self.ground):
            raise ValueError("need one value per subset")

    def __call__(self, A) -> int:
        return self.values[_mask(self.ground, A)]

    def violations(self, all_pairs: bool | None = None) -> list[str]:
        """Every failed rank axiom (empty when this is a matroid rank function).

        Submodularity is checked on all subset pairs for ground sets of at
        most 7 elements.  Larger tables use the local form
        r(X+e) + r(X+f) >= r(X+e+f) + r(X), which together with unit
        increase is equivalent and costs n^2 2^n instead of 4^n.
        """
        r = self.values
        n = len(self.ground)
        all_pairs = n <= 7 if all_pairs is None else all_pairs
        out = []
        if r[0] != 0:
            out.append("r(empty) != 0")
        for m in range(1 << n):
            for i in range(n):
                if not m >> i & 1:
                    d = r[m | 1 << i] - r[m]
                    if d not in (0, 1):
                        out.append(f"unit increase fails at {_sorted_labels(self.ground, m)} + {self.ground[i]}")
        if all_pairs:
            pairs = ((a, b) for a in range(1 << n) for b in range(a + 1, 1 << n))
        else:
            pairs = ((m | 1 << i, m | 1 << j) for m in range(1 << n)
                     for i, j in combinations(range(n), 2) if not m >> i & 1 and not m >> j & 1)
        for a, b in pairs:
            if r[a & b] + r[a | b] > r[a] + r[b]:
                out.append(f"submodularity fails for {_sorted_labels(self.ground, a)}, {_sorted_labels(self.ground, b)}")
        return out

    def to_matroid(self) -> Matroid:
        full = (1 << len(self.ground)) - 1
        k = self.values[full]
        bases = [m for m in range(full + 1) if _popcount(m) == k and self.values[m] == k]
        return from_bases(self.ground, bases)


def amalgam_search(M1: Matroid, M2: Matroid, fixed: dict | None = None) -> AmalgamResult:
    """Decide whether a matroid on exactly the union of the ground sets
    restricts to ``M1`` and ``M2``.

    Backtracking over rank values of the subsets that meet both private
    parts, in increasing cardinality.  ``fixed`` pins extra rank values
    (label set -> rank).  Any amalgam on a larger ground set restricts to
    one on the union, so ``infeasible`` rules out amalgams altogether.
    """
    S1, S2 = set(M1.ground), set(M2.ground)
    common = S1 & S2
    if M1.restriction(common) != M2.restriction(common):
        return AmalgamResult("incompatible", detail="restrictions to the common ground set differ")
    ground = M1.ground + tuple(v for v in M2.ground if v not in S1)
    n = len(ground)
    if n > MAX_AMALGAM_GROUND:
        raise SizeGuardError(f"amalgam search is limited to {MAX_AMALGAM_GROUND} ground elements")
    m1 = _mask(ground, M1.ground)
    m2 = _mask(ground, M2.ground)
    size = 1 << n
    r = [-1] * size
    for m in range(size):
        if m & ~m1 == 0:
            r[m] = M1.rank(_labels(ground, m))
        elif m & ~m2 == 0:
            r[m] = M2.rank(_labels(ground, m))
    pinned = {}
    for labels, value in (fixed or {}).items():
        m = _mask(ground, labels)
        if r[m] >= 0:
            if r[m] != value:
                return AmalgamResult("infeasible", detail="pinned value contradicts a restriction")
        else:
            pinned[m] = value
    free = sorted((m for m in range(size) if r[m] < 0), key=lambda m: (_popcount(m), _canon(m)))

    def bounds(m: int) -> tuple[int, int]:
        idx = _indices(m)
        lo, hi = 0, len(idx)
        for e in idx:
            v = r[m & ~(1 << e)]
            lo = max(lo, v)
            hi = min(hi, v + 1)
        for e, f in combinations(idx, 2):
            me, mf = m & ~(1 << e), m & ~(1 << f)
            hi = min(hi, r[me] + r[mf] - r[me & mf])
        if m in pinned:
            v = pinned[m]
            lo, hi = (v, v) if lo <= v <= hi else (1, 0)
        return lo, hi

    nodes = 0
    # iterative DFS: stack of (position, next value to try, hi)
    pos = 0
    stack: list[tuple[int, int]] = []
    while True:
        if pos == len(free):
            break
        m = free[pos]
        lo, hi = bounds(m)
        nodes += 1
        if lo <= hi:
            r[m] = lo
            stack.append((lo, hi))
            pos += 1
            continue
        # backtrack to the latest level with an untried value
        while stack:
            pos -= 1
            v, h = stack.pop()
            if v < h:
                r[free[pos]] = v + 1
                stack.append((v + 1, h))
                pos += 1
                break
            r[free[pos]] = -1
        else:
            return AmalgamResult("infeasible", nodes=nodes, detail="no rank function extends both restrictions")
    table = RankTable(ground, r)
    bad = table.violations()
    if bad:
        raise AssertionError(f"solver produced an invalid rank table: {bad[:3]}")
    N = table.to_matroid()
    if N.restriction(M1.ground) != M1 or N.restriction(M2.ground) != M2:
        raise AssertionError("solver output does not restrict to the inputs")
    return AmalgamResult("amalgam", matroid=N, nodes=nodes)
