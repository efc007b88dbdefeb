"""Seeded generators for subspace-segmentation test problems.

The standard construction draws k low-dimensional subspaces of R^d — either
a rotation chain (one random orthonormal basis, repeatedly mapped by a fixed
random rotation, giving independent subspaces with controlled pairwise
angles) or fully independent random bases — fills each with uniform [-1, 1]
coefficient samples, and plants Gaussian outlier columns at random positions
among the samples. Everything is driven by a single integer seed.
"""

import numpy as np
from dataclasses import dataclass

from .linalg import as_support, support_complement


@dataclass
class GenSpec:
    ambient_dim: int = 500
    num_subspaces: int = 5
    subspace_dim: int = 5
    samples_per_subspace: int = 40
    num_outliers: int = 0
    outlier_std_mode: str = "matched"
    outlier_std: float = None
    construction: str = "rotation-chain"
    seed: int = 0

    def __post_init__(self):
        if min(self.ambient_dim, self.num_subspaces, self.subspace_dim,
               self.samples_per_subspace) < 1:
            raise ValueError("dimensions and counts must be positive")
        if self.num_outliers < 0:
            raise ValueError("num_outliers must be nonnegative")
        if self.outlier_std_mode not in ("matched", "explicit"):
            raise ValueError("outlier_std_mode must be 'matched' or 'explicit'")
        if self.outlier_std_mode == "explicit":
            if self.outlier_std is None or not self.outlier_std > 0:
                raise ValueError("explicit mode needs a positive outlier_std")
        if self.construction not in ("rotation-chain", "independent-random"):
            raise ValueError(
                "construction must be 'rotation-chain' or 'independent-random'")
        if self.subspace_dim > self.ambient_dim:
            raise ValueError("subspace_dim cannot exceed ambient_dim")
        if (self.construction == "independent-random"
                and self.num_subspaces * self.subspace_dim > self.ambient_dim):
            raise ValueError("independent-random needs num_subspaces * "
                             "subspace_dim <= ambient_dim")


@dataclass
class ProblemInstance:
    """Generated data plus its ground truth.

    x = x0 + c0 with x0 the authentic samples (zero on outlier columns) and
    c0 the outliers (zero elsewhere). support0 lists the outlier columns,
    labels holds subspace indices with -1 on outliers, and v0 is an
    orthonormal basis of the row space of x0.
    """

    x: np.ndarray
    x0: np.ndarray
    c0: np.ndarray
    support0: np.ndarray
    labels: np.ndarray
    v0: np.ndarray


def _random_rotation(rng, d):
    """Haar-ish random rotation: QR of a Gaussian matrix, det fixed to +1."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q


def _orthonormal_basis(rng, d, dim):
    q, r = np.linalg.qr(rng.standard_normal((d, dim)))
    return q * np.sign(np.diag(r))


def _row_space_basis(x0, support0):
    """Right singular vectors of x0 at numerical rank, with the rows on the
    outlier columns pinned to exactly zero (they are already zero up to
    roundoff, since those columns of x0 vanish)."""
    u, s, vt = np.linalg.svd(x0, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise ValueError("x0 has no nonzero column")
    r0 = int(np.count_nonzero(s > max(x0.shape) * np.finfo(float).eps * s[0]))
    v0 = vt[:r0].T.copy()
    v0[support0, :] = 0.0
    return v0


def mean_abs_sample_magnitude(x0, support0):
    """Mean absolute entry over the authentic (non-outlier) columns of x0."""
    x0 = np.asarray(x0, dtype=float)
    keep = support_complement(as_support(support0, x0.shape[1]), x0.shape[1])
    if keep.size == 0:
        raise ValueError("no authentic columns")
    return float(np.abs(x0[:, keep]).mean())


def generate(spec):
    """Draw a problem instance from a GenSpec.

    Parameters
    ----------
    spec : GenSpec

    Returns
    -------
    ProblemInstance
        Columns are n = num_subspaces * samples_per_subspace + num_outliers
        wide; outlier positions are a uniform random subset of the column
        range, with the authentic samples filling the rest in subspace order.
    """
    rng = np.random.default_rng(spec.seed)
    d = spec.ambient_dim
    k = spec.num_subspaces
    dim = spec.subspace_dim
    per = spec.samples_per_subspace
    n_auth = k * per
    n = n_auth + spec.num_outliers

    if spec.construction == "rotation-chain":
        basis = _orthonormal_basis(rng, d, dim)
        rot = _random_rotation(rng, d)
        bases = []
        for _ in range(k):
            bases.append(basis)
            basis = rot @ basis
    else:
        bases = [_orthonormal_basis(rng, d, dim) for _ in range(k)]

    blocks = [bases[i] @ rng.uniform(-1.0, 1.0, size=(dim, per))
              for i in range(k)]
    samples = np.hstack(blocks)
    block_labels = np.repeat(np.arange(k), per)

    support0 = np.sort(rng.choice(n, size=spec.num_outliers, replace=False))
    authentic = support_complement(support0, n)

    x0 = np.zeros((d, n))
    x0[:, authentic] = samples
    labels = np.full(n, -1, dtype=int)
    labels[authentic] = block_labels

    c0 = np.zeros((d, n))
    if spec.num_outliers:
        if spec.outlier_std_mode == "matched":
            std = np.abs(samples).mean()
        else:
            std = spec.outlier_std
        c0[:, support0] = rng.normal(0.0, std, size=(d, spec.num_outliers))

    return ProblemInstance(x=x0 + c0, x0=x0, c0=c0, support0=support0,
                           labels=labels, v0=_row_space_basis(x0, support0))


def generate_disjoint_dependent(seed):
    """Eleven disjoint 20-dimensional subspaces in R^200, 20 samples each.

    The subspace dimensions sum past the ambient dimension, so the spans are
    pairwise disjoint but not independent — the regime where segmentation is
    strictly harder than the independent case. No outliers.
    """
    rng = np.random.default_rng(seed)
    d, k, dim, per = 200, 11, 20, 20
    bases = [_orthonormal_basis(rng, d, dim) for _ in range(k)]
    blocks = [bases[i] @ rng.uniform(-1.0, 1.0, size=(dim, per))
              for i in range(k)]
    x0 = np.hstack(blocks)
    n = k * per
    support0 = np.array([], dtype=int)
    return ProblemInstance(x=x0.copy(), x0=x0, c0=np.zeros((d, n)),
                           support0=support0,
                           labels=np.repeat(np.arange(k), per),
                           v0=_row_space_basis(x0, support0))
