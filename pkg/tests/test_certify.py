import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mat, random_psd, random_symmetric
from rzamalgam import Polynomial, evaluate, multi_affine_part, parse, restrict_line
from rzamalgam.certify import (
    SosCertificate,
    Status,
    det_polynomial,
    global_nonneg,
    load_certificate,
    orthant_in_rigid_set,
    quadratic_real_zero,
    rayleigh,
    real_zero_sample,
    recheck,
    rigidly_convex_contains,
    stable_sample,
    verify_sos,
    wagner_wei_stable,
)
from rzamalgam.linalg import identity, is_psd, scale
from rzamalgam.matroids import bases_generating_poly, poljak_turzik
from rzamalgam.realroot import is_real_rooted


def test_psd_spec_examples():
    assert is_psd(mat([[1, -1], [-1, 1]]))
    assert not is_psd(mat([[0, 2], [2, 0]]))
    assert is_psd(scale(identity(3), 4))


def test_quadratic_examples():
    v = quadratic_real_zero(parse("1 - x1^2 - x2^2"))
    assert v.status == Status.CERTIFIED
    bad = parse("x1*x2 - 1")
    v = quadratic_real_zero(bad)
    assert v.status == Status.REFUTED
    assert recheck(bad, v)
    assert quadratic_real_zero(parse("1 + x")).status == Status.CERTIFIED
    with pytest.raises(ValueError):
        quadratic_real_zero(parse("x1 + x2^2"))
    with pytest.raises(ValueError):
        quadratic_real_zero(parse("1 + x^3"))


def test_real_zero_sample_examples():
    v = real_zero_sample(parse("1 + x1^2"), 50)
    assert v.status == Status.REFUTED
    assert v.witness["direction"] == [1]
    v0 = real_zero_sample(parse("x1 + x2"), 50)
    assert v0.status == Status.REFUTED and v0.witness["reason"] == "vanishes at origin"
    assert recheck(parse("x1 + x2"), v0)
    rng = random.Random(1)
    p = det_polynomial([("x1", random_symmetric(rng, 3)), ("x2", random_symmetric(rng, 3))])
    v = real_zero_sample(p, 100, seed=5)
    assert v.status == Status.PROBABLE and v.samples_used == 100
    assert "seed=5" in v.notes


def test_stable_sample_examples():
    assert stable_sample(parse("x1*x2 - 1"), 200).status == Status.PROBABLE
    p = parse("1 - x1^2 - x2^2")
    v = stable_sample(p, 200)
    assert v.status == Status.REFUTED and recheck(p, v)
    q = parse("x1*x2 + x3*x4")
    v = stable_sample(q, 200)
    assert v.status == Status.REFUTED and recheck(q, v)
    # an explicit hand-checkable witness line: 2*t^2 + 2 has no real roots
    assert not is_real_rooted(restrict_line(q, [1, 1, 1, 1], [1, 1, -1, -1]))
    with pytest.raises(ValueError):
        stable_sample(parse("0"))


def test_rayleigh_examples():
    assert rayleigh(parse("1 + x1 + x2 + x1*x2"), "x1", "x2").is_zero()
    R = rayleigh(parse("x1*x2 + x1*x3 + x2*x3"), "x1", "x2")
    assert R == parse("x3^2")
    assert "x1" not in R.occurring_vars()
    with pytest.raises(ValueError):
        rayleigh(parse("x1^2 + x2"), "x1", "x2")


def test_shipped_certificates():
    p = bases_generating_poly(poljak_turzik("M1"))
    q = bases_generating_poly(poljak_turzik("M2"))
    cp, cq = load_certificate("rayleigh_pM1"), load_certificate("rayleigh_qM2")
    assert sorted(w for w, _ in cp.squares) == [Fraction(3, 4), 1]
    assert sorted(w for w, _ in cq.squares) == [Fraction(1, 12), Fraction(2, 3), 1]
    assert verify_sos(rayleigh(p, "x1", "x2"), cp)
    assert verify_sos(rayleigh(q, "x1", "x2"), cq)
    assert not verify_sos(rayleigh(q, "x1", "x2"), cp)
    assert SosCertificate.from_json(cp.to_json()).total() == cp.total()
    assert verify_sos(parse("x^2"), SosCertificate([(Fraction(1), parse("x"))]))
    with pytest.raises(ValueError):
        SosCertificate([(Fraction(-1), parse("x"))])


def test_global_nonneg_examples():
    assert global_nonneg(parse("x3^2")).status == Status.CERTIFIED
    v = global_nonneg(parse("x2*x4"))
    assert v.status == Status.REFUTED
    assert evaluate(parse("x2*x4"), v.witness["point"]) < 0
    p = bases_generating_poly(poljak_turzik("M1"))
    assert global_nonneg(rayleigh(p, "x1", "x2"), load_certificate("rayleigh_pM1")).status == Status.CERTIFIED
    # nonnegative but not decided by the shortcuts
    assert global_nonneg(parse("x^2 - 2*x*y + y^2"), n=50).status == Status.UNKNOWN


def test_wagner_wei_examples():
    assert wagner_wei_stable(parse("x1*x2 + x1*x3 + x2*x3"), small_matroid_rule=False).status == Status.CERTIFIED
    v = wagner_wei_stable(parse("x1*x2 + x3*x4"), small_matroid_rule=False)
    assert v.status == Status.REFUTED
    # every Rayleigh pair at the root is refuted, so the best obligation is Refuted
    assert v.children[0].status == Status.REFUTED
    p = bases_generating_poly(poljak_turzik("M1"))
    v = wagner_wei_stable(p, {"root": load_certificate("rayleigh_pM1")})
    assert v.children[0].status == Status.CERTIFIED
    assert v.status >= Status.PROBABLE
    with pytest.raises(ValueError):
        wagner_wei_stable(parse("1 - x1*x2"))
    with pytest.raises(ValueError):
        wagner_wei_stable(parse("x1^2"))


def test_wagner_wei_refutations_recheck():
    v = wagner_wei_stable(parse("x1*x2 + x3*x4"), small_matroid_rule=False)
    refuted = [n for n in v.walk() if n.status == Status.REFUTED and n.witness]
    assert refuted
    for node in refuted:
        R = parse(node.label.split(" = ", 1)[1])
        assert recheck(R.with_vars(node.witness["vars"]), node)


def test_rigid_convexity_examples():
    p = parse("1 - x^2")
    assert rigidly_convex_contains(p, [Fraction(1, 2)])
    assert not rigidly_convex_contains(p, [3])
    assert rigidly_convex_contains(p, [1])
    assert not orthant_in_rigid_set(parse("1 - x"))
    assert orthant_in_rigid_set(parse("1"))


def test_det_polynomial_examples():
    A, B = mat([[1, 0], [0, 2]]), mat([[0, 1], [1, 0]])
    assert det_polynomial([("x", A)]) == parse("1 + 3*x + 2*x^2")
    assert det_polynomial([]) == parse("1")
    assert det_polynomial([("x", A), ("y", B)]) == parse("1 + 3*x + 2*x^2 - y^2")
    with pytest.raises(ValueError):
        det_polynomial([("x", A), ("y", mat([[1]]))])


# ---------------------------------------------------------------------------
# properties

quad_coeff = st.integers(-4, 4)


@given(st.lists(quad_coeff, min_size=5, max_size=5))
@settings(max_examples=80, deadline=None)
def test_quadratic_agrees_with_sampling(c):
    monos = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    p = Polynomial(("x1", "x2"), {(0, 0): 1, **dict(zip(monos, c))})
    v = quadratic_real_zero(p)
    if v.status == Status.CERTIFIED:
        assert real_zero_sample(p, 60).status == Status.PROBABLE
    else:
        assert not is_real_rooted(v.witness["line"])
        assert recheck(p, v)


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_psd_determinants_have_stable_map(seed):
    rng = random.Random(seed)
    p = det_polynomial([(f"x{i}", random_psd(rng, 3)) for i in range(1, 4)])
    assert stable_sample(p, 30, seed).status == Status.PROBABLE
    m = multi_affine_part(p)
    if not m.is_zero():
        assert stable_sample(m, 30, seed).status == Status.PROBABLE
