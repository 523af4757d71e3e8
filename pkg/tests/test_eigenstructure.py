"""Explicit gap eigenfunctions, the U table, and rigidity checks."""

import math

import numpy as np
import pytest

from atchain import (
    ArgumentError,
    ParamVector,
    PreconditionError,
    StructureError,
    UTable,
    a0,
    check_orbital_relation,
    check_support_boundary,
    dmap_rank,
    eqcase_checks,
    extract_U,
    gen_neutral_interval,
    gen_no_neutral,
    gen_uniform,
    h_profile,
    lambda_star,
    lambda_star_eigenbasis,
    operator_for,
    predicted_U_from_D,
    psi,
    neutral_labels,
    wilson_f,
)
from atchain.eigenstructure import _eigdata


# ---------------------------------------------------------------------------
# position profile


def test_h_profile_frozen_values():
    h = h_profile(4)
    want = [
        math.cos(math.pi / 8),
        math.cos(3 * math.pi / 8),
        -math.cos(3 * math.pi / 8),
        -math.cos(math.pi / 8),
    ]
    np.testing.assert_allclose(h, want, atol=1e-15)


def test_h_profile_three_term_recurrence():
    # clamped extension h(0) = h(1), h(n+1) = h(n) satisfies
    # h(r-1) + h(r+1) = 2 cos(pi/n) h(r) everywhere
    for n in (3, 4, 5, 7):
        h = h_profile(n)
        ext = np.concatenate([[h[0]], h, [h[-1]]])
        lhs = ext[:-2] + ext[2:]
        np.testing.assert_allclose(lhs, 2 * math.cos(math.pi / n) * h, atol=1e-14)


def test_a0_frozen_value():
    assert a0(4) == pytest.approx(0.27059805007309845, abs=1e-15)
    assert a0(3) == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
    assert a0(5) > 0


# ---------------------------------------------------------------------------
# wilson_f and psi


def test_wilson_uniform():
    pv = gen_uniform(4)
    e = wilson_f(pv, 2)
    assert e.lam == pytest.approx(lambda_star(4))
    assert e.residual <= 1e-14
    u = extract_U(pv, e)
    np.testing.assert_allclose(u.D, [-a0(4), a0(4), 0.0], atol=1e-14)


def test_wilson_needs_neutral_label(hand3):
    e = wilson_f(hand3, 2)
    assert e.residual <= 1e-14
    with pytest.raises(PreconditionError):
        wilson_f(hand3, 1)


def test_wilson_every_neutral_label_of_interval_instance():
    pv = gen_neutral_interval(5, 2, 4, seed=3)
    for c in (2, 3, 4):
        e = wilson_f(pv, c)
        assert e.residual <= 1e-13
        u = extract_U(pv, e)
        want = np.zeros(4)
        want[c - 1] = a0(5)
        want[c - 2] = -a0(5)
        np.testing.assert_allclose(u.D, want, atol=1e-13)


def test_psi_hand3(hand3):
    # n = 3 with neutral set {2} is the smallest end-to-end case
    e = psi(hand3)
    assert e.lam == pytest.approx(0.25)
    assert e.residual <= 1e-14
    u = extract_U(hand3, e)
    rho = 0.7 / 0.3
    np.testing.assert_allclose(u.D, [a0(3), rho * a0(3)], atol=1e-14)
    # nonzero D-sum separates psi from the span of the f_c family
    assert abs(u.D.sum()) > 1e-10


def test_psi_interval_instance():
    pv = gen_neutral_interval(4, 2, 3, seed=5)
    e = psi(pv)
    assert e.residual <= 1e-13
    u = extract_U(pv, e)
    rho = float(pv.get(1, 4)) / float(pv.get(4, 1))
    np.testing.assert_allclose(u.D, [a0(4), 0.0, rho * a0(4)], atol=1e-13)


def test_psi_precondition():
    with pytest.raises(PreconditionError):
        psi(gen_uniform(4))  # neutral set is 1..n, not 2..n-1
    with pytest.raises(PreconditionError):
        psi(gen_no_neutral(4, seed=0))


# ---------------------------------------------------------------------------
# eigenbasis extraction


def test_eigenbasis_uniform():
    pv = gen_uniform(4)
    basis = lambda_star_eigenbasis(pv)
    assert len(basis) == 3
    op = operator_for(pv)
    for i, e in enumerate(basis):
        assert e.residual <= 1e-12
        assert op.norm(e.g) == pytest.approx(1.0, abs=1e-12)
        for other in basis[i + 1 :]:
            assert abs(op.inner(e.g, other.g)) <= 1e-12


def test_eigenbasis_empty_when_gap_exceeds_target():
    assert lambda_star_eigenbasis(gen_no_neutral(4, seed=1)) == []


# ---------------------------------------------------------------------------
# U table


def test_extract_U_rejects_non_eigenvector():
    pv = gen_uniform(4)
    g = np.random.default_rng(0).standard_normal(24)
    with pytest.raises(StructureError):
        extract_U(pv, _eigdata(pv, g, lambda_star(4)))


def test_extract_U_welldef_and_support():
    pv = gen_neutral_interval(5, 3, 4, seed=1)
    e = wilson_f(pv, 3)
    u = extract_U(pv, e)
    assert u.welldef_residual <= 1e-12
    assert (2, 3) in u.support and (3, 4) in u.support
    # pairs that cannot see the moving label stay out of the support
    assert (1, 2) not in u.support


def test_utable_json(hand3):
    import json

    u = extract_U(hand3, psi(hand3))
    data = json.loads(u.to_json())
    assert data["n"] == 3
    assert len(data["U"]) == 3
    assert len(data["D"]) == 2


def test_predicted_U_matches_extraction():
    # plain partial sums for the uniform vector
    pv = gen_uniform(4)
    e = wilson_f(pv, 3)
    u = extract_U(pv, e)
    pred = predicted_U_from_D(pv, u.D, neutral_labels(pv))
    for pair, v in u.U.items():
        assert v == pytest.approx(pred.U[pair], abs=1e-12)
    # crossing pairs pick up the 2 p_{j,i} factor
    pv2 = gen_neutral_interval(4, 2, 3, seed=2)
    e2 = psi(pv2)
    u2 = extract_U(pv2, e2)
    pred2 = predicted_U_from_D(pv2, u2.D, neutral_labels(pv2))
    for pair, v in u2.U.items():
        assert v == pytest.approx(pred2.U[pair], abs=1e-12)
    assert u2.support == pred2.support


def test_predicted_U_needs_neutral_label():
    pv = gen_no_neutral(4, seed=2)
    with pytest.raises(PreconditionError):
        predicted_U_from_D(pv, np.zeros(3), neutral_labels(pv))


# ---------------------------------------------------------------------------
# orbital relation and support boundary


def test_orbital_relation_on_true_eigenvector():
    pv = gen_neutral_interval(4, 2, 3, seed=7)
    for e in lambda_star_eigenbasis(pv):
        rep = check_orbital_relation(pv, extract_U(pv, e))
        assert rep.ok and rep.checked >= 1 and rep.violations == ()


def test_orbital_relation_flags_broken_table(hand3):
    # U_{1,3} must equal 2 p_{3,1} (U_{1,2} + U_{2,3}) = 0.6 here
    u = UTable(
        n=3,
        U={(1, 2): 1.0, (1, 3): 0.5, (2, 3): 0.0},
        D=np.array([1.0, 0.0]),
        support=frozenset({(1, 2), (1, 3)}),
        welldef_residual=0.0,
    )
    rep = check_orbital_relation(hand3, u)
    assert not rep.ok
    assert rep.violations[0][0] == (1, 2, 3)
    assert rep.violations[0][1] == "relation"


def test_orbital_relation_flags_non_half_pij():
    pv = gen_no_neutral(3, seed=3)
    u = UTable(
        n=3,
        U={(1, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0},
        D=np.array([1.0, 1.0]),
        support=frozenset({(1, 2)}),
        welldef_residual=0.0,
    )
    rep = check_orbital_relation(pv, u)
    kinds = {v[1] for v in rep.violations}
    assert "p_ij" in kinds and "p_jk" in kinds


def test_support_boundary():
    pv = gen_neutral_interval(4, 2, 3, seed=9)
    u = extract_U(pv, psi(pv))
    rep = check_support_boundary(u)
    assert rep.ok and rep.A_star <= rep.B_star
    empty = UTable(n=3, U={}, D=np.zeros(2), support=frozenset(), welldef_residual=0.0)
    with pytest.raises(ArgumentError):
        check_support_boundary(empty)


# ---------------------------------------------------------------------------
# equality-case rigidity and the D map


def test_eqcase_on_uniform_eigenvector():
    pv = gen_uniform(5)
    rep = eqcase_checks(pv, wilson_f(pv, 3))
    assert rep.ok
    assert rep.far_product <= 1e-12
    assert rep.profile_cosine >= 1 - 1e-12
    assert rep.inner_offset <= 1e-12
    assert rep.orbit_defect <= 1e-10
    assert rep.active_orbits >= 1


def test_eqcase_on_interval_eigenvectors():
    pv = gen_neutral_interval(5, 2, 4, seed=4)
    for e in lambda_star_eigenbasis(pv):
        assert eqcase_checks(pv, e).ok


def test_dmap_rank_uniform():
    pv = gen_uniform(4)
    basis = lambda_star_eigenbasis(pv)
    assert dmap_rank(pv, basis) == len(basis) == 3


def test_dmap_rank_interval():
    pv = gen_neutral_interval(5, 2, 4, seed=6)
    basis = lambda_star_eigenbasis(pv)
    assert len(basis) == 4  # N = 3 = n - 2 forces multiplicity n - 1
    assert dmap_rank(pv, basis) == 4


def test_dmap_rank_empty_and_precondition():
    assert dmap_rank(gen_uniform(4), []) == 0
    donor = wilson_f(gen_uniform(4), 2)
    with pytest.raises(PreconditionError):
        dmap_rank(gen_no_neutral(4, seed=4), [donor])
