import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strobotomo.matcore import (DimensionError, ExpmRangeError, devectorize, expm,
                                hs_inner, minimal_poly_degree, numerical_rank,
                                vectorize)
from strobotomo.randomized import random_complex

from conftest import I2, SX, SY, SZ


def test_vectorize_identity_and_unit():
    assert np.array_equal(vectorize(I2), [1, 0, 0, 1])
    e12 = np.zeros((2, 2))
    e12[0, 1] = 1
    assert np.array_equal(vectorize(e12), [0, 0, 1, 0])


def test_vectorize_rejects_non_square():
    with pytest.raises(DimensionError):
        vectorize(np.zeros((2, 3)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_vectorize_round_trip_bit_exact(n, seed):
    m = random_complex(np.random.default_rng(seed), n)
    assert np.array_equal(devectorize(vectorize(m)), m)


def test_vec_kronecker_identity(rng):
    for n in (2, 3):
        x, y, z = (random_complex(rng, n) for _ in range(3))
        assert np.max(np.abs(vectorize(x @ y @ z) - np.kron(z.T, x) @ vectorize(y))) <= 1e-13


def test_hs_inner_examples(rng):
    assert hs_inner(np.eye(3), np.eye(3)) == 3
    assert hs_inner(SX, SY) == 0
    a, b = random_complex(rng, 3), random_complex(rng, 3)
    assert hs_inner(a, b) == pytest.approx(np.dot(vectorize(a).conj(), vectorize(b)), abs=1e-14)
    assert hs_inner(a, b) == pytest.approx(np.conj(hs_inner(b, a)), abs=1e-14)
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


def _taylor_expm(m, terms=60):
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


def test_expm_examples():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(expm(np.diag([0.3, -1.2])), np.diag(np.exp([0.3, -1.2])), rtol=1e-14)
    theta = 0.7
    m = 1j * theta * SX
    closed = math.cos(theta) * I2 + 1j * math.sin(theta) * SX
    assert np.max(np.abs(expm(m) - _taylor_expm(m))) <= 1e-13
    assert np.max(np.abs(expm(m) - closed)) <= 1e-13


def test_expm_relative_accuracy_against_taylor(rng):
    for n in (2, 3, 5):
        for _ in range(5):
            m = random_complex(rng, n)
            m = m * rng.uniform(0.5, 10) / np.linalg.norm(m, 1)
            ref = _taylor_expm(m, terms=120)
            assert np.linalg.norm(expm(m) - ref) / np.linalg.norm(ref) <= 1e-12


def test_expm_group_property(rng):
    for _ in range(10):
        m = random_complex(rng, 3)
        m = m * rng.uniform(0, 2) / np.linalg.norm(m, 2)
        s, t = rng.uniform(0, 1, size=2)
        assert np.max(np.abs(expm(m * (s + t)) - expm(m * s) @ expm(m * t))) <= 1e-10


def test_expm_overflow_is_an_error():
    with pytest.raises(ExpmRangeError):
        expm(np.diag([1000.0, 0.0]))


def test_numerical_rank_examples():
    assert numerical_rank(np.eye(4)) == 4
    assert numerical_rank(np.diag([1.0, 1e-16])) == 1
    rows = [vectorize(SX), vectorize(SY), vectorize(SX + SY), vectorize(I2)]
    assert numerical_rank(np.array(rows)) == 3
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.zeros((0, 4))) == 0


def test_numerical_rank_invariances(rng):
    a = rng.normal(size=(6, 3)) @ rng.normal(size=(3, 5))
    q, _ = np.linalg.qr(random_complex(rng, 5))
    assert numerical_rank(a) == 3
    assert numerical_rank(a[rng.permutation(6)]) == 3
    assert numerical_rank(a @ q) == 3


def test_minimal_poly_examples():
    assert minimal_poly_degree(np.zeros((4, 4))).degree == 1
    assert minimal_poly_degree(np.eye(4)).degree == 1
    assert minimal_poly_degree(np.diag([1.0, 2.0, 2.0])).degree == 2
    s = -1j * (np.kron(I2, SZ) - np.kron(SZ.T, I2))
    mp = minimal_poly_degree(s)
    assert mp.degree == 3 and not mp.ambiguous


def test_minimal_poly_jordan_block():
    j = np.diag([2.0, 2.0, 2.0]) + np.diag([1.0, 0.0], 1)
    assert minimal_poly_degree(j).degree == 2
    assert minimal_poly_degree(np.diag([1.0, 1.0], 1)).degree == 3


def test_minimal_poly_similarity_invariance(rng):
    cases = [np.diag([1.0, 2.0, 2.0, 3.0]), np.diag([0.5, 0.5, -1.0]),
             np.diag([2.0, 2.0, 2.0]) + np.diag([1.0, 0.0], 1), random_complex(rng, 4)]
    for m in cases:
        d = m.shape[0]
        while True:
            p = np.eye(d) + 0.3 * random_complex(rng, d)
            if np.linalg.cond(p) <= 10:
                break
        base = minimal_poly_degree(m, 1e-9).degree
        assert minimal_poly_degree(p @ m @ np.linalg.inv(p), 1e-9).degree == base


def test_minimal_poly_reports_ambiguity():
    # eigenvalues 1 and 1 + 1e-9 sit right at the rank threshold
    mp = minimal_poly_degree(np.diag([1.0, 1.0 + 1e-9]), 1e-10)
    assert mp.ambiguous
