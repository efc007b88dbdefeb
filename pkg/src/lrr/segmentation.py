"""Spectral segmentation from a recovered row-space basis, and its accuracy score."""

import numpy as np
from sklearn.cluster import KMeans

from .linalg import _as_matrix


def sim_affinity(u_star):
    """Entrywise absolute projector |U U^T|, symmetrized to absorb rounding."""
    u = _as_matrix(u_star, "u_star")
    w = np.abs(u @ u.T)
    return (w + w.T) / 2.0


def spectral_cluster(w, k, seed):
    """Cluster an affinity matrix into k groups.

    Embeds by the top-k eigenvectors of the symmetrically normalized
    affinity D^{-1/2} W D^{-1/2} (isolated nodes stay at the origin), row
    normalizes, then runs seeded k-means with 20 restarts keeping the best
    inertia. Deterministic given (w, k, seed).
    """
    w = _as_matrix(w, "w")
    n = w.shape[0]
    if w.shape[1] != n:
        raise ValueError("w must be square")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= number of samples")
    deg = w.sum(axis=1)
    inv_root = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    s = w * inv_root[:, None] * inv_root[None, :]
    _, vecs = np.linalg.eigh((s + s.T) / 2.0)
    emb = vecs[:, -k:]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = emb / np.where(norms > 0, norms, 1.0)
    km = KMeans(n_clusters=k, n_init=20, random_state=int(seed) % (2 ** 32))
    return km.fit_predict(emb)


def accuracy(pred, truth):
    """Majority-vote clustering accuracy.

    Each cluster takes the ground-truth class contributing the most members
    (ties to the smallest class index); the score is the fraction of samples
    whose class matches their cluster's label. A class may end up labeling
    several clusters.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ValueError("pred and truth must be vectors of the same length")
    if pred.size == 0:
        raise ValueError("empty labeling")
    correct = 0
    for cl in np.unique(pred):
        _, counts = np.unique(truth[pred == cl], return_counts=True)
        correct += int(counts.max())
    return correct / pred.size
