"""Norms, projectors, and proximal maps against hand values and oracles."""

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrr import (
    as_support,
    column_shrink,
    l21_norm,
    l2inf_norm,
    normalize_columns_on_support,
    nuclear_norm,
    project_T,
    project_column_space,
    project_columns,
    project_row_space,
    project_row_space_left,
    spectral_norm,
    support_complement,
    svd,
    svt,
)

from oracles import nuclear_norm_by_eigh, power_iteration_norm


def random_orthonormal(rng, d, r):
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q[:, :r]


# ---------------------------------------------------------------- svd


def test_svd_identity():
    f = svd(np.eye(3))
    assert f.rank == 3
    npt.assert_allclose(f.sigma, [1.0, 1.0, 1.0])
    npt.assert_allclose(f.u_r @ np.diag(f.sigma_r) @ f.v_r.T, np.eye(3),
                        atol=1e-12)


def test_svd_zero_matrix_has_rank_zero():
    f = svd(np.zeros((2, 2)))
    assert f.rank == 0


def test_svd_diagonal_values():
    f = svd(np.diag([3.0, 2.0, 1.0]))
    npt.assert_allclose(f.sigma, [3.0, 2.0, 1.0])
    assert f.rank == 3


def test_svd_reconstructs_random_matrix():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((6, 4))
    f = svd(m)
    npt.assert_allclose(f.u @ np.diag(f.sigma) @ f.v.T, m, atol=1e-12)


# -------------------------------------------------------------- norms


def test_nuclear_norm_diag():
    assert nuclear_norm(np.diag([3.0, 2.0, 1.0])) == pytest.approx(6.0)


def test_nuclear_norm_matches_eigh_oracle():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((4, 4))
    assert nuclear_norm(m) == pytest.approx(nuclear_norm_by_eigh(m), abs=1e-8)


def test_l21_norm_hand_values():
    assert l21_norm(np.array([[3.0, 0.0], [4.0, 0.0]])) == pytest.approx(5.0)
    assert l21_norm(np.eye(2)) == pytest.approx(2.0)


def test_l2inf_norm_is_max_column_norm():
    assert l2inf_norm(np.array([[3.0, 0.0], [4.0, 0.0]])) == pytest.approx(5.0)


def test_l2inf_vs_spectral_on_repeated_column():
    """k copies of a unit column: max column norm 1, spectral norm sqrt(k)."""
    rng = np.random.default_rng(2)
    for k in (2, 5, 9):
        u = rng.standard_normal(7)
        u /= np.linalg.norm(u)
        m = np.tile(u[:, None], (1, k))
        assert l2inf_norm(m) == pytest.approx(1.0)
        assert spectral_norm(m) == pytest.approx(np.sqrt(k))


def test_spectral_norm_matches_power_iteration():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((8, 5))
    assert spectral_norm(m) == pytest.approx(power_iteration_norm(m), abs=1e-8)


# --------------------------------------------------------- projectors


def test_column_space_projection_onto_e1_keeps_first_row():
    m = np.arange(6.0).reshape(2, 3)
    p = project_column_space(np.array([[1.0], [0.0]]), m)
    npt.assert_allclose(p[0], m[0])
    npt.assert_allclose(p[1], 0.0)


def test_column_support_projection_keeps_listed_columns():
    m = np.arange(12.0).reshape(3, 4)
    p = project_columns([1, 3], m)
    npt.assert_allclose(p[:, [1, 3]], m[:, [1, 3]])
    npt.assert_allclose(p[:, [0, 2]], 0.0)


def test_projectors_idempotent_and_self_adjoint():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((10, 10))
    w = rng.standard_normal((10, 10))
    u = random_orthonormal(rng, 10, 3)
    v = random_orthonormal(rng, 10, 4)
    support = [0, 2, 5, 9]

    for proj in (
        lambda a: project_column_space(u, a),
        lambda a: project_row_space(v, a),
        lambda a: project_row_space_left(v, a),
        lambda a: project_columns(support, a),
        lambda a: project_T(u, v, a),
    ):
        npt.assert_allclose(proj(proj(m)), proj(m), atol=1e-12)
        # self-adjoint: <P m, w> = <m, P w>
        assert np.vdot(proj(m), w) == pytest.approx(np.vdot(m, proj(w)),
                                                    abs=1e-10)


def test_column_projection_commutes_with_left_multiplication():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((6, 6))
    b = rng.standard_normal((6, 8))
    support = [0, 3, 7]
    npt.assert_allclose(project_columns(support, a @ b),
                        a @ project_columns(support, b), atol=1e-12)


def test_column_projection_commutes_with_space_projections():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((9, 9))
    u = random_orthonormal(rng, 9, 3)
    support = [1, 4, 8]
    npt.assert_allclose(
        project_columns(support, project_column_space(u, m)),
        project_column_space(u, project_columns(support, m)), atol=1e-12)
    npt.assert_allclose(
        project_columns(support, project_row_space_left(u, m)),
        project_row_space_left(u, project_columns(support, m)), atol=1e-12)


def test_project_T_complement_annihilated():
    rng = np.random.default_rng(7)
    m = rng.standard_normal((8, 8))
    u = random_orthonormal(rng, 8, 2)
    v = random_orthonormal(rng, 8, 3)
    comp = m - project_T(u, v, m)
    npt.assert_allclose(project_T(u, v, comp), 0.0, atol=1e-12)
    npt.assert_allclose(u.T @ comp, 0.0, atol=1e-12)
    npt.assert_allclose(comp @ v, 0.0, atol=1e-12)


# ------------------------------------------------------ proximal maps


def test_svt_diagonal():
    npt.assert_allclose(svt(np.diag([3.0, 1.0]), 2.0), np.diag([1.0, 0.0]),
                        atol=1e-12)


def test_svt_zero_threshold_is_identity():
    rng = np.random.default_rng(8)
    m = rng.standard_normal((4, 4))
    npt.assert_allclose(svt(m, 0.0), m, atol=1e-12)


def test_svt_large_threshold_gives_zero():
    rng = np.random.default_rng(9)
    m = rng.standard_normal((4, 4))
    tau = np.linalg.norm(m, 2) + 0.1
    npt.assert_allclose(svt(m, tau), 0.0, atol=1e-12)


def test_svt_is_prox_of_nuclear_norm():
    """svt(M, tau) must beat 1000 random perturbations on the prox objective."""
    rng = np.random.default_rng(10)
    m = rng.standard_normal((3, 3))
    tau = 0.7
    zstar = svt(m, tau)

    def prox_obj(z):
        return tau * nuclear_norm(z) + 0.5 * np.linalg.norm(z - m) ** 2

    best = prox_obj(zstar)
    for _ in range(1000):
        trial = zstar + rng.standard_normal((3, 3)) * rng.choice([1e-3, 0.1, 1.0])
        assert prox_obj(trial) >= best - 1e-12


def test_column_shrink_hand_value():
    m = np.array([[3.0, 0.0], [4.0, 0.0]])
    npt.assert_allclose(column_shrink(m, 2.0), m * (3.0 / 5.0), atol=1e-12)


def test_column_shrink_kills_small_columns():
    m = np.array([[0.5, 3.0], [0.0, 0.0]])
    out = column_shrink(m, 1.0)
    npt.assert_allclose(out[:, 0], 0.0)
    npt.assert_allclose(out[:, 1], [2.0, 0.0])


def test_column_shrink_is_prox_of_l21():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((3, 3))
    tau = 0.6
    cstar = column_shrink(m, tau)

    def prox_obj(c):
        return tau * l21_norm(c) + 0.5 * np.linalg.norm(c - m) ** 2

    best = prox_obj(cstar)
    for _ in range(1000):
        trial = cstar + rng.standard_normal((3, 3)) * rng.choice([1e-3, 0.1, 1.0])
        assert prox_obj(trial) >= best - 1e-12


# --------------------------------------------- support-normalized maps


def test_normalize_columns_on_support():
    m = np.array([[3.0, 7.0], [4.0, 7.0]])
    h = normalize_columns_on_support(m, [0])
    npt.assert_allclose(h[:, 0], [0.6, 0.8])
    npt.assert_allclose(h[:, 1], 0.0)


def test_normalize_columns_rejects_zero_supported_column():
    with pytest.raises(ValueError):
        normalize_columns_on_support(np.zeros((2, 3)), [1])


def test_as_support_and_complement():
    npt.assert_array_equal(as_support([3, 1, 1], 5), [1, 3])
    npt.assert_array_equal(support_complement([1, 3], 5), [0, 2, 4])
    with pytest.raises(ValueError):
        as_support([7], 5)


# --------------------------------------------------- norm inequalities


def test_normalized_support_matrix_spectral_bound():
    """||H|| <= sqrt(|I|) for column-normalized H, tight for equal columns."""
    rng = np.random.default_rng(12)
    for size in (1, 4, 9):
        support = list(range(size))
        m = rng.standard_normal((10, size + 3))
        h = normalize_columns_on_support(m, support)
        assert spectral_norm(h) <= np.sqrt(size) + 1e-12

    # identical supported columns achieve the bound
    u = rng.standard_normal(10)
    m = np.tile(u[:, None], (1, 4))
    h = normalize_columns_on_support(m, [0, 1, 2, 3])
    assert spectral_norm(h) == pytest.approx(2.0)


def test_l2inf_of_orthonormal_times_vt():
    rng = np.random.default_rng(13)
    u = random_orthonormal(rng, 12, 4)
    v = rng.standard_normal((9, 4))
    expected = np.linalg.norm(v, axis=1).max()
    assert l2inf_norm(u @ v.T) == pytest.approx(expected, abs=1e-12)


def test_norm_inequality_block():
    rng = np.random.default_rng(14)
    for _ in range(50):
        m = rng.standard_normal((6, 6))
        n = rng.standard_normal((6, 6))
        assert l2inf_norm(m @ n) <= spectral_norm(m) * l2inf_norm(n) + 1e-10
        assert abs(np.vdot(m, n)) <= l2inf_norm(m) * l21_norm(n) + 1e-10
        assert l2inf_norm(m) <= spectral_norm(m) + 1e-10


# ----------------------------------------------- property-based checks


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.01, 5.0))
def test_svt_shrinks_singular_values_exactly(seed, tau):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((4, 5))
    out = svt(m, tau)
    s_in = np.linalg.svd(m, compute_uv=False)
    s_out = np.linalg.svd(out, compute_uv=False)
    npt.assert_allclose(s_out, np.maximum(s_in - tau, 0.0), atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_column_shrink_never_grows_columns(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((5, 6))
    out = column_shrink(m, 0.3)
    before = np.linalg.norm(m, axis=0)
    after = np.linalg.norm(out, axis=0)
    assert np.all(after <= before + 1e-12)
    npt.assert_allclose(after, np.maximum(before - 0.3, 0.0), atol=1e-12)
