"""Affinity construction, spectral clustering, and the accuracy score."""

import numpy as np
import numpy.testing as npt
import pytest

from lrr import (
    GenSpec,
    accuracy,
    generate,
    generate_disjoint_dependent,
    segment_instance,
    sim_affinity,
    spectral_cluster,
)

from oracles import acc_by_counting, all_labelings


# ------------------------------------------------------------ affinity


def test_affinity_of_orthogonal_lines_is_block_identity():
    """Two orthogonal 1-dim groups give a two-block affinity pattern."""
    u = np.zeros((4, 2))
    u[0, 0] = u[1, 0] = 1.0 / np.sqrt(2)
    u[2, 1] = u[3, 1] = 1.0 / np.sqrt(2)
    w = sim_affinity(u)
    expected = np.zeros((4, 4))
    expected[:2, :2] = 0.5
    expected[2:, 2:] = 0.5
    npt.assert_allclose(w, expected, atol=1e-12)


def test_affinity_is_symmetric_nonnegative():
    rng = np.random.default_rng(0)
    u = np.linalg.qr(rng.standard_normal((8, 3)))[0]
    w = sim_affinity(u)
    npt.assert_allclose(w, w.T)
    assert np.all(w >= 0)


def test_affinity_off_block_vanishes_for_independent_subspaces(
        clean_instance, clean_solution):
    """The recovered projector is block-diagonal on independent subspaces."""
    f = clean_solution.z_svd
    u_star = f.u[:, :f.rank]
    w = sim_affinity(u_star)
    labels = clean_instance.labels
    same = labels[:, None] == labels[None, :]
    assert np.abs(w[~same]).max() < 1e-8
    assert w[same].mean() > 1e-3


def test_affinity_concentrates_for_disjoint_dependent_subspaces():
    inst = generate_disjoint_dependent(0)
    w = sim_affinity(inst.v0)
    labels = inst.labels
    same = labels[:, None] == labels[None, :]
    assert w[same].mean() > 2.0 * w[~same].mean()


# ---------------------------------------------------------- clustering


def test_spectral_cluster_exact_on_block_affinity():
    w = np.zeros((6, 6))
    w[:3, :3] = 1.0
    w[3:, 3:] = 1.0
    labels = spectral_cluster(w, 2, seed=0)
    assert accuracy(labels, np.array([0, 0, 0, 1, 1, 1])) == 1.0


def test_spectral_cluster_single_group():
    w = np.ones((5, 5))
    labels = spectral_cluster(w, 1, seed=0)
    npt.assert_array_equal(labels, 0)


def test_spectral_cluster_is_deterministic():
    rng = np.random.default_rng(1)
    u = np.linalg.qr(rng.standard_normal((12, 3)))[0]
    w = sim_affinity(u)
    a = spectral_cluster(w, 3, seed=7)
    b = spectral_cluster(w, 3, seed=7)
    npt.assert_array_equal(a, b)


def test_spectral_cluster_validates_input():
    with pytest.raises(ValueError):
        spectral_cluster(np.ones((3, 4)), 2, seed=0)
    with pytest.raises(ValueError):
        spectral_cluster(np.ones((3, 3)), 0, seed=0)
    with pytest.raises(ValueError):
        spectral_cluster(np.ones((3, 3)), 4, seed=0)


# ------------------------------------------------------------ accuracy


def test_accuracy_permutation_invariant():
    truth = np.array([0, 0, 1, 1, 2, 2])
    pred = np.array([2, 2, 0, 0, 1, 1])
    assert accuracy(pred, truth) == 1.0


def test_accuracy_majority_vote():
    # one cluster, classes {A: 3, B: 1} -> 3/4
    assert accuracy(np.zeros(4, int), np.array([0, 0, 0, 1])) == 0.75


def test_accuracy_hand_case():
    pred = np.array([1, 1, 2, 2, 2, 2])
    truth = np.array([0, 0, 0, 1, 1, 1])
    assert accuracy(pred, truth) == pytest.approx(5.0 / 6.0)


def test_accuracy_validates_input():
    with pytest.raises(ValueError):
        accuracy(np.array([0, 1]), np.array([0]))
    with pytest.raises(ValueError):
        accuracy(np.array([]), np.array([]))


def test_accuracy_matches_counting_oracle_on_small_partitions():
    """Exhaustive agreement on all labelings of 4 samples into <= 3 groups."""
    for pred in all_labelings(4, 3):
        for truth in all_labelings(4, 3):
            got = accuracy(np.array(pred), np.array(truth))
            assert got == pytest.approx(acc_by_counting(pred, truth))


# ---------------------------------------------------------- end to end


def test_segmentation_after_recovery_with_outliers():
    """30% outliers, weight 0.3: authentic samples cluster perfectly."""
    worst = 1.0
    for seed in range(10):
        inst = generate(GenSpec(num_outliers=86, seed=seed))
        summary, labels, _ = segment_instance(
            inst.x, 5, 0.3, seed, labels=inst.labels, support0=None)
        assert summary["converged"]
        worst = min(worst, summary["acc"])
    assert worst >= 0.99
