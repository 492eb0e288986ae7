import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import eigmin, mat, random_gram, random_psd, random_symmetric
from rzamalgam.linalg import (
    InconsistentSystem,
    charpoly_berkowitz,
    charpoly_faddeev,
    det,
    is_psd,
    matmul,
    negative_direction,
    quadratic_form,
    solve,
    symbolic_det,
)
from rzamalgam.polycore import Polynomial
import numpy as np


def test_psd_examples():
    assert not is_psd(mat([[0, 2], [2, 0]]))
    assert is_psd(mat([[1, 1], [1, 1]]))
    assert is_psd(mat([[0]]))
    with pytest.raises(ValueError):
        is_psd(mat([[1, 2], [0, 1]]))


@pytest.mark.parametrize("seed", range(5))
def test_charpoly_algorithms_agree(seed):
    rng = random.Random(seed)
    for d in range(1, 7):
        M = random_symmetric(rng, d)
        assert charpoly_berkowitz(M) == charpoly_faddeev(M)
        cp = charpoly_berkowitz(M)
        assert cp[0] == (-1) ** d * det(M)


@pytest.mark.parametrize("seed", range(5))
def test_negative_direction_is_a_witness(seed):
    rng = random.Random(seed)
    for _ in range(30):
        M = random_gram(rng, rng.randint(1, 5))
        v = negative_direction(M)
        if is_psd(M):
            assert v is None
        else:
            assert quadratic_form(M, v) < 0


def test_psd_matches_eigenvalues():
    rng = random.Random(7)
    for _ in range(100):
        M = random_gram(rng, rng.randint(1, 6))
        lam = eigmin(M)
        if abs(lam) > 1e-9:
            assert is_psd(M) == (lam > 0)


def test_low_rank_psd():
    rng = random.Random(3)
    for _ in range(20):
        assert is_psd(random_psd(rng, 5, rank=2))


def test_solve_and_inconsistency():
    A = mat([[1, 2], [2, 4]])
    X = solve(A, mat([[3], [6]]))
    assert matmul(A, X) == mat([[3], [6]])
    with pytest.raises(InconsistentSystem):
        solve(A, mat([[1], [0]]))


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
@settings(max_examples=40)
def test_symbolic_det_matches_numeric(vals):
    M = [[Polynomial.constant(vals[3 * i + j]) for j in range(3)] for i in range(3)]
    assert symbolic_det(M).constant_term() == det(mat([vals[0:3], vals[3:6], vals[6:9]]))
    assert float(det(mat([vals[0:3], vals[3:6], vals[6:9]]))) == pytest.approx(
        np.linalg.det(np.array(vals, dtype=float).reshape(3, 3)), abs=1e-8)
