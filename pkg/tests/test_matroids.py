import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rzamalgam import elementary_symmetric, multi_affine_part, parse, support
from rzamalgam.linalg import det
from rzamalgam.matroids import (
    PT_SHARED,
    DeltaMatroid,
    MatroidError,
    RankTable,
    amalgam_search,
    bases_generating_poly,
    delta_from_json,
    exchange_options,
    from_bases,
    from_json,
    is_delta_matroid,
    is_modular,
    lower_matroid,
    poljak_turzik,
    support_matroid,
    uniform,
    upper_matroid,
)
from rzamalgam.polycore import SizeGuardError


def fs(*xs):
    return frozenset(xs)


# ---------------------------------------------------------------------------
# generators


def linear_matroid(rng: random.Random, n: int, k: int, names=None):
    """Column matroid of a random small integer k x n matrix."""
    names = names or [f"e{i}" for i in range(n)]
    k = min(k, n)
    while True:
        A = [[Fraction(rng.randint(-1, 2)) for _ in range(n)] for _ in range(k)]
        bases = [fs(*(names[i] for i in c)) for c in combinations(range(n), k)
                 if det([[A[r][i] for i in c] for r in range(k)]) != 0]
        if bases:
            return from_bases(names, bases)


def rank_oracle(M, A):
    """Size of a largest subset of A contained in a basis, by brute force."""
    return max(len(set(A) & B) for B in M.basis_sets())


def flats_oracle(M):
    g = list(M.ground)
    out = []
    for k in range(len(g) + 1):
        for A in combinations(g, k):
            r = rank_oracle(M, A)
            if all(rank_oracle(M, set(A) | {x}) > r for x in g if x not in A):
                out.append(frozenset(A))
    return out


def random_delta(rng: random.Random, names=("a", "b", "c", "d", "e")):
    """Support of a product of multi-affine stable blocks on disjoint variables,
    followed by taking the multi-affine part of a product of linear forms."""
    vs = list(names)
    rng.shuffle(vs)
    p = parse("1")
    while vs:
        if len(vs) >= 2 and rng.random() < 0.3:
            a, b = vs.pop(), vs.pop()
            p = p * parse(f"{a}*{b} - 1")
        else:
            k = rng.randint(1, min(3, len(vs)))
            block = [vs.pop() for _ in range(k)]
            c0 = rng.randint(0, 2)
            lin = parse(" + ".join(f"{rng.randint(1, 3)}*{v}" for v in block))
            p = p * (lin + c0)
    if rng.random() < 0.5:
        extra = parse(" + ".join(f"{rng.randint(1, 2)}*{v}" for v in rng.sample(names, 2))) + 1
        p = multi_affine_part(p * extra)
    return DeltaMatroid.from_sets(names, support(p))


# ---------------------------------------------------------------------------
# examples


def test_from_bases_examples():
    U = from_bases("abc", [fs("a", "b"), fs("a", "c"), fs("b", "c")])
    assert U == uniform(2, "abc")
    with pytest.raises(MatroidError) as err:
        from_bases("abcd", [fs("a", "b"), fs("c", "d")])
    B, C, x = err.value.witness
    assert (B, C, x) == (fs("a", "b"), fs("c", "d"), "a")
    with pytest.raises(MatroidError):
        from_bases("abc", [])
    with pytest.raises(MatroidError):
        from_bases("abc", [fs("a"), fs("b", "c")])


def test_poljak_turzik_pair():
    M1, M2 = poljak_turzik("M1"), poljak_turzik("M2")
    assert len(M1.bases) == 30 and len(M2.bases) == 31
    R = M1.restriction(PT_SHARED)
    assert R == M2.restriction(PT_SHARED)
    expected = {fs(*c) for c in combinations(PT_SHARED, 3)} - {fs("x1", "x2", "x3"), fs("x4", "x5", "x6")}
    assert R.basis_sets() == expected
    assert "y" in M1.closure({"x1", "x4"})
    assert M1.rank({"y", "x3", "x6"}) == 2
    assert M2.rank({"z", "x3", "x6"}) == 3
    assert M1.rank(set()) == 0
    assert not M1.loops() and not M1.coloops()
    assert not M2.loops() and not M2.coloops()


def test_contraction_and_uniform():
    assert uniform(2, "abc").contraction({"a"}) == uniform(1, "bc")
    p = bases_generating_poly(uniform(3, "abcd"))
    assert p == elementary_symmetric(("a", "b", "c", "d"), 3)


def test_contraction_matches_derivative():
    from rzamalgam import partial_derivative

    M1 = poljak_turzik("M1")
    p = bases_generating_poly(M1)
    assert partial_derivative(p, "x1") == bases_generating_poly(M1.contraction({"x1"}))


def test_support_matroid_examples():
    assert support_matroid(bases_generating_poly(poljak_turzik("M1"))) == poljak_turzik("M1")
    assert support_matroid(elementary_symmetric(("a", "b", "c", "d"), 3)) == uniform(3, "abcd")
    with pytest.raises(MatroidError):
        support_matroid(parse("x1*x2 + x3*x4"))


def test_modularity_examples():
    for bases in ([fs()], [fs("a")], [fs("a", "b")], [fs("a"), fs("b")]):
        assert is_modular(from_bases("ab", bases))
    assert is_modular(uniform(2, "abc"))
    assert not is_modular(poljak_turzik("M1"))


def test_modularity_against_flat_oracle():
    rng = random.Random(11)
    for _ in range(15):
        M = linear_matroid(rng, rng.randint(3, 5), rng.randint(1, 3))
        flats = flats_oracle(M)
        assert set(flats) == set(M.flats())
        brute = all(rank_oracle(M, F & G) + rank_oracle(M, F | G) == rank_oracle(M, F) + rank_oracle(M, G)
                    for F in flats for G in flats)
        assert is_modular(M) == brute


def test_delta_examples():
    D = DeltaMatroid.from_sets("ab", [fs(), fs("a"), fs("a", "b")])
    assert is_delta_matroid(D)
    assert lower_matroid(D).rank() == 0
    assert upper_matroid(D) == uniform(2, "ab")
    assert is_delta_matroid(DeltaMatroid.from_sets("abc", [fs("a", "c")]))
    bad = is_delta_matroid(DeltaMatroid.from_sets("abcd", [fs("a", "b"), fs("c", "d")]))
    assert not bad and bad.witness == (fs("a", "b"), fs("c", "d"), "a")
    U = uniform(2, "abcd")
    DU = DeltaMatroid.from_sets(U.ground, U.basis_sets())
    assert lower_matroid(DU) == upper_matroid(DU) == U
    mixed = DeltaMatroid.from_sets("abc", [fs("a"), fs("b"), fs("a", "c"), fs("b", "c")])
    assert is_delta_matroid(mixed)
    assert lower_matroid(mixed).basis_sets() == {fs("a"), fs("b")}
    assert upper_matroid(mixed).basis_sets() == {fs("a", "c"), fs("b", "c")}
    j = delta_from_json('{"ground": ["a", "b"], "feasible": [[], ["a"]]}')
    assert is_delta_matroid(j)


def test_case_one_witness():
    p = bases_generating_poly(poljak_turzik("M1"))
    q = bases_generating_poly(poljak_turzik("M2"))
    fam = support(p) | support(q) | {fs("y", "z")}
    D = DeltaMatroid.from_sets(PT_SHARED + ("y", "z"), fam)
    assert not is_delta_matroid(D)
    A, B = fs("x1", "x4", "x5"), fs("y", "z")
    res = is_delta_matroid(D, pairs=[(A, B)])
    assert res.witness == (A, B, "x5")
    opts = exchange_options(D, A, B, "x5")
    assert len(opts) == 5
    assert not any(feasible for _, _, feasible in opts)
    assert {s for _, s, _ in opts} == {fs("x4"), fs("x1"), fs("x1", "x4"), fs("y", "x1", "x4"), fs("z", "x1", "x4")}


def test_amalgam_examples():
    M1, M2 = poljak_turzik("M1"), poljak_turzik("M2")
    res = amalgam_search(M1, M2)
    assert res.kind == "infeasible" and not res.found
    U = uniform(2, "abc")
    res = amalgam_search(U, U)
    assert res.found and res.matroid == U
    res = amalgam_search(uniform(2, "ab"), uniform(2, "bc"))
    assert res.found
    assert res.matroid.restriction("ab") == uniform(2, "ab")
    assert res.matroid.restriction("bc") == uniform(2, "bc")
    assert RankTable(res.matroid.ground, res.matroid.rank_table()).violations() == []


def test_amalgam_incompatible_and_guard():
    assert amalgam_search(uniform(1, "ab"), from_bases("bc", [fs("c")])).kind == "incompatible"
    big1 = uniform(2, [f"a{i}" for i in range(6)])
    big2 = uniform(2, [f"b{i}" for i in range(6)])
    with pytest.raises(SizeGuardError):
        amalgam_search(big1, big2)


def test_rank_argument_for_the_pair():
    M1, M2 = poljak_turzik("M1"), poljak_turzik("M2")
    A, B = {"x1", "x4"}, {"x2", "x5"}
    # y and z lie in cl(A) and cl(B), so in any amalgam r({y,z}) <= r(A) + r(B) - r(A u B) = 1
    assert {"y"} <= M1.closure(A) and {"y"} <= M1.closure(B)
    assert {"z"} <= M2.closure(A) and {"z"} <= M2.closure(B)
    assert M1.rank(A) + M1.rank(B) - M1.rank(A | B) == 1
    for v in (1, 2):
        assert amalgam_search(M1, M2, fixed={fs("y", "z"): v}).kind == "infeasible"


def test_rank_table_detects_violations():
    t = RankTable("ab", [0, 1, 1, 3])
    assert any("unit increase" in v for v in t.violations())
    t = RankTable("ab", [0, 1, 1, 1])
    assert t.violations() == []
    t = RankTable("abc", [0, 1, 1, 1, 1, 2, 2, 1])
    assert t.violations()


# ---------------------------------------------------------------------------
# properties


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_rank_axioms_hold(seed):
    rng = random.Random(seed)
    M = linear_matroid(rng, rng.randint(2, 6), rng.randint(1, 3))
    assert RankTable(M.ground, M.rank_table()).violations(all_pairs=True) == []
    g = list(M.ground)
    for A in (set(rng.sample(g, rng.randint(0, len(g)))) for _ in range(5)):
        assert M.rank(A) == rank_oracle(M, A) <= len(A)
        cl = M.closure(A)
        assert M.rank(cl) == M.rank(A)
        bigger = A | {rng.choice(g)}
        assert cl <= M.closure(bigger)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_self_amalgam_is_identity(seed):
    rng = random.Random(seed)
    M = linear_matroid(rng, rng.randint(2, 5), rng.randint(1, 3))
    res = amalgam_search(M, M)
    assert res.found and res.matroid == M


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_found_amalgams_restrict_correctly(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    N = linear_matroid(rng, n + 2, rng.randint(1, 3), [f"e{i}" for i in range(n + 2)])
    S1 = N.ground[:n]
    S2 = N.ground[2:]
    M1, M2 = N.restriction(S1), N.restriction(S2)
    res = amalgam_search(M1, M2)
    assert res.found
    assert res.matroid.restriction(S1) == M1
    assert res.matroid.restriction(S2) == M2


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_stable_supports_are_delta_matroids(seed):
    D = random_delta(random.Random(seed))
    assert is_delta_matroid(D)
    from_bases(D.ground, lower_matroid(D).basis_sets())
    from_bases(D.ground, upper_matroid(D).basis_sets())


def test_json_roundtrip():
    M = poljak_turzik("M2")
    assert from_json(M.to_json()) == M
