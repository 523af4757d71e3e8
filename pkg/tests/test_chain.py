"""Stationary law, the averaging operators, and the symmetrized form."""

import math
from fractions import Fraction

import numpy as np
import pytest

from atchain import (
    ArgumentError,
    CapacityError,
    ParamVector,
    apply_E,
    apply_K,
    apply_L,
    commutation_check,
    gen_regular_random,
    gen_uniform,
    inner,
    operator_for,
    save_matrix_csv,
    stationary,
)


def _rand_f(size, seed=0):
    return np.random.default_rng(seed).standard_normal(size)


# ---------------------------------------------------------------------------
# stationary law


def test_stationary_two_labels():
    pv = ParamVector(2, {(1, 2): 0.7})
    mu = stationary(pv).mu
    # mu(12) : mu(21) = p_{1,2} : p_{2,1}
    np.testing.assert_allclose(mu, [0.7, 0.3], atol=1e-15)


def test_stationary_uniform():
    mu = stationary(gen_uniform(4)).mu
    np.testing.assert_allclose(mu, np.full(24, 1 / 24), atol=1e-15)


def test_stationary_hand3(hand3):
    mu = stationary(hand3).mu
    # only the 1-vs-3 factor varies: weight 0.7/4 when 1 precedes 3, 0.3/4
    # when 3 precedes 1 (lex ranks 0..2 have 1 before 3)
    weights = np.array([0.7, 0.7, 0.7, 0.3, 0.3, 0.3]) / 4
    np.testing.assert_allclose(mu, weights / weights.sum(), atol=1e-15)
    assert abs(mu.sum() - 1.0) < 1e-15


def test_stationary_rational_exact():
    pv = ParamVector(
        3,
        {(1, 2): Fraction(1, 2), (1, 3): Fraction(7, 10), (2, 3): Fraction(1, 2)},
        mode="rational",
    )
    dist = stationary(pv)
    assert dist.mode == "rational"
    assert sum(dist.mu) == 1  # exact
    assert dist.mu[0] == Fraction(7, 30)
    np.testing.assert_allclose(
        dist.as_array(), stationary(pv.to_float()).mu, atol=1e-15
    )


def test_stationary_rational_cap():
    with pytest.raises(CapacityError):
        stationary(gen_uniform(7, mode="rational"))


def test_stationary_detailed_balance_float():
    # exhaustive over states and moves at n = 4
    pv = gen_regular_random(4, seed=11)
    op = operator_for(pv)
    K = op.dense_K()
    flux = op.mu[:, None] * K
    np.testing.assert_allclose(flux, flux.T, atol=1e-15)


def test_stationary_detailed_balance_exact(hand3):
    # mu(x) p_{swap back} = mu(x^tau) p_{swap}: exact over Fractions
    pv = ParamVector(
        3,
        {(1, 2): Fraction(1, 2), (1, 3): Fraction(7, 10), (2, 3): Fraction(1, 2)},
        mode="rational",
    )
    from atchain import Permutation, state_space

    dist = stationary(pv)
    sp = state_space(3)
    for idx in range(sp.size):
        x = Permutation(tuple(int(v) for v in sp.perms[idx]))
        for r in (1, 2):
            y = x.apply_tau(r)
            a, b = x.entries[r - 1], x.entries[r]
            assert dist.mu[idx] * pv.get(b, a) == dist.mu[y.rank()] * pv.get(a, b)


# ---------------------------------------------------------------------------
# operators


def test_apply_E_two_labels():
    pv = ParamVector(2, {(1, 2): 0.7})
    # indicator of the sorted state averages to a constant under E_1
    np.testing.assert_allclose(apply_E(pv, 1, [1.0, 0.0]), [0.7, 0.7], atol=1e-15)


def test_E_is_projection_and_self_adjoint():
    pv = gen_regular_random(4, seed=3)
    f = _rand_f(24, 1)
    g = _rand_f(24, 2)
    for r in (1, 2, 3):
        Ef = apply_E(pv, r, f)
        np.testing.assert_allclose(apply_E(pv, r, Ef), Ef, atol=1e-14)
        assert inner(pv, Ef, g) == pytest.approx(
            inner(pv, f, apply_E(pv, r, g)), abs=1e-14
        )


def test_K_is_mean_of_E():
    pv = gen_regular_random(4, seed=5)
    f = _rand_f(24, 4)
    mean = sum(apply_E(pv, r, f) for r in (1, 2, 3)) / 3
    np.testing.assert_allclose(apply_K(pv, f), mean, atol=1e-15)
    np.testing.assert_allclose(apply_L(pv, f), f - mean, atol=1e-15)


def test_dense_matches_matrix_free():
    pv = gen_regular_random(4, seed=6)
    op = operator_for(pv)
    f = _rand_f(24, 5)
    np.testing.assert_allclose(op.dense_K() @ f, op.apply_K(f), atol=1e-14)
    np.testing.assert_allclose(op.dense_E(2) @ f, op.apply_E(2, f), atol=1e-14)
    np.testing.assert_allclose(op.dense_F(2) @ f, op.apply_F(2, f), atol=1e-14)
    np.testing.assert_allclose(op.dense_L() @ f, op.apply_L(f), atol=1e-14)
    np.testing.assert_allclose(op.dense_S() @ f, op.apply_S(f), atol=1e-14)


def test_row_sums_and_range():
    for pv in (gen_uniform(4), gen_regular_random(5, seed=0)):
        K = operator_for(pv).dense_K()
        np.testing.assert_allclose(K.sum(axis=1), 1.0, atol=1e-13)
        assert K.min() >= 0.0


def test_S_symmetric_and_similar_to_K():
    pv = gen_regular_random(4, seed=9)
    op = operator_for(pv)
    S = op.dense_S()
    np.testing.assert_allclose(S, S.T, atol=1e-15)
    # similarity: D^{1/2} K D^{-1/2} entrywise
    D = np.diag(op.sqrt_mu)
    Dinv = np.diag(1.0 / op.sqrt_mu)
    np.testing.assert_allclose(S, D @ op.dense_K() @ Dinv, atol=1e-13)
    eig_S = np.linalg.eigvalsh(S)
    eig_K = np.sort(np.linalg.eigvals(op.dense_K()).real)
    np.testing.assert_allclose(eig_S, eig_K, atol=1e-10)


def test_constant_is_fixed():
    pv = gen_regular_random(5, seed=2)
    ones = np.ones(120)
    np.testing.assert_allclose(apply_K(pv, ones), ones, atol=1e-14)
    np.testing.assert_allclose(apply_L(pv, ones), 0.0, atol=1e-14)


def test_commutation_far_pairs():
    pv = gen_regular_random(5, seed=8)
    f = _rand_f(120, 7)
    assert commutation_check(pv, 1, 3, f) <= 1e-14
    assert commutation_check(pv, 1, 4, f) <= 1e-14
    with pytest.raises(ArgumentError):
        commutation_check(pv, 1, 2, f)


def test_operator_cache_and_validation():
    pv = gen_uniform(4)
    assert operator_for(pv) is operator_for(pv)
    op = operator_for(pv)
    with pytest.raises(ArgumentError):
        op.apply_K(np.zeros(7))
    with pytest.raises(ArgumentError):
        op.apply_E(4, np.zeros(24))
    with pytest.raises(CapacityError):
        operator_for(gen_uniform(8)).dense_K()


def test_save_matrix_csv(tmp_path):
    mat = np.arange(6.0).reshape(2, 3)
    path = tmp_path / "mat.csv"
    save_matrix_csv(mat, path)
    np.testing.assert_allclose(np.loadtxt(path, delimiter=","), mat)


def test_inner_is_stationary_weighted(hand3):
    op = operator_for(hand3)
    f = _rand_f(6, 3)
    g = _rand_f(6, 4)
    assert op.inner(f, g) == pytest.approx(float(np.sum(f * g * op.mu)), abs=1e-15)
    assert op.norm(f) == pytest.approx(math.sqrt(op.inner(f, f)))
