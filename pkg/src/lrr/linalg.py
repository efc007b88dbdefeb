"""Dense linear-algebra primitives: norms, projectors, and shrinkage operators.

Conventions: matrices are 2-d float64 numpy arrays. Column supports are
sorted integer index arrays over [0, n). Orthonormal bases are passed as
matrices with orthonormal columns; the projector functions trust the caller
on that and only check shapes.
"""

import numpy as np
import scipy.linalg
from dataclasses import dataclass

DEFAULT_RANK_REL_TOL = 1e-9


def _svd_uv(m, compute_uv=True):
    # The default gesdd driver occasionally fails to converge on
    # ill-conditioned iterates; gesvd is slower but does not.
    try:
        return np.linalg.svd(m, full_matrices=False, compute_uv=compute_uv)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(m, full_matrices=False,
                                compute_uv=compute_uv, lapack_driver="gesvd")


def _as_matrix(m, name="matrix"):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("%s must be 2-d, got shape %s" % (name, (m.shape,)))
    if not np.isfinite(m).all():
        raise ValueError("%s contains non-finite entries" % name)
    return m


def as_support(indices, n):
    """Validate and normalize a column support: sorted unique ints in [0, n)."""
    idx = np.asarray(indices, dtype=int).ravel()
    idx = np.unique(idx)
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError("support index out of range for %d columns" % n)
    return idx


def support_complement(support, n):
    """Indices in [0, n) not in the support."""
    mask = np.ones(n, dtype=bool)
    mask[as_support(support, n)] = False
    return np.nonzero(mask)[0]


@dataclass
class SvdFactors:
    """Economy SVD u @ diag(sigma) @ v.T with a numerical rank estimate.

    sigma holds all min(d, n) singular values, nonincreasing. rank counts
    those above rank_rel_tol * sigma[0]. The *_r properties give the
    rank-truncated factors.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank: int

    @property
    def u_r(self):
        return self.u[:, : self.rank]

    @property
    def sigma_r(self):
        return self.sigma[: self.rank]

    @property
    def v_r(self):
        return self.v[:, : self.rank]


def svd(m, rank_rel_tol=DEFAULT_RANK_REL_TOL):
    """Economy SVD with numerical rank = #{i : sigma_i > rank_rel_tol * sigma_0}.

    A zero matrix gets rank 0 (its sigma entries are all zero). Deterministic
    for a fixed input.
    """
    m = _as_matrix(m)
    u, s, vt = _svd_uv(m)
    if s.size and s[0] > 0:
        rank = int(np.count_nonzero(s > rank_rel_tol * s[0]))
    else:
        rank = 0
    return SvdFactors(u=u, sigma=s, v=vt.T, rank=rank)


def nuclear_norm(m):
    """Sum of singular values."""
    m = _as_matrix(m)
    return float(_svd_uv(m, compute_uv=False).sum())


def l21_norm(m):
    """Sum of column l2 norms."""
    m = _as_matrix(m)
    return float(np.linalg.norm(m, axis=0).sum())


def l2inf_norm(m):
    """Largest column l2 norm."""
    m = _as_matrix(m)
    if m.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(m, axis=0).max())


def spectral_norm(m):
    """Largest singular value."""
    m = _as_matrix(m)
    if min(m.shape) == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def project_column_space(basis_u, m):
    """P_U(M) = U U^T M for a column-orthonormal U."""
    basis_u = np.asarray(basis_u, dtype=float)
    m = np.asarray(m, dtype=float)
    if basis_u.shape[0] != m.shape[0]:
        raise ValueError("basis and matrix row counts differ")
    return basis_u @ (basis_u.T @ m)


def project_row_space_left(basis_v, m):
    """Left-acting row-space projector V V^T M."""
    basis_v = np.asarray(basis_v, dtype=float)
    m = np.asarray(m, dtype=float)
    if basis_v.shape[0] != m.shape[0]:
        raise ValueError("basis and matrix row counts differ")
    return basis_v @ (basis_v.T @ m)


def project_row_space(basis_v, m):
    """Right-acting row-space projector M V V^T."""
    basis_v = np.asarray(basis_v, dtype=float)
    m = np.asarray(m, dtype=float)
    if basis_v.shape[0] != m.shape[1]:
        raise ValueError("basis rows must match matrix columns")
    return (m @ basis_v) @ basis_v.T


def project_columns(support, m):
    """Keep the supported columns of M, zero the rest."""
    m = np.asarray(m, dtype=float)
    idx = as_support(support, m.shape[1])
    out = np.zeros_like(m)
    out[:, idx] = m[:, idx]
    return out


def project_T(u, v, m):
    """P_T(M) = P_U(M) + M V V^T - P_U(M) V V^T.

    Computed as P_U(M) + P_V(M - P_U(M)), which is the same operator with
    one fewer product.
    """
    m = np.asarray(m, dtype=float)
    pu = project_column_space(u, m) if u.shape[1] else np.zeros_like(m)
    if v.shape[1] == 0:
        return pu
    return pu + project_row_space(v, m - pu)


def svt(m, tau):
    """Singular value thresholding U diag(max(sigma - tau, 0)) V^T.

    This is the proximal operator of tau * nuclear norm.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    m = np.asarray(m, dtype=float)
    u, s, vt = _svd_uv(m)
    keep = s > tau
    if not keep.any():
        return np.zeros_like(m)
    shrunk = s[keep] - tau
    return (u[:, keep] * shrunk) @ vt[keep]


def column_shrink(m, tau):
    """Shrink each column toward zero: c -> c * max(||c|| - tau, 0) / ||c||.

    Proximal operator of tau * l2,1 norm; zero columns stay zero.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    m = np.asarray(m, dtype=float)
    norms = np.linalg.norm(m, axis=0)
    scale = np.zeros_like(norms)
    nz = norms > 0
    scale[nz] = np.maximum(norms[nz] - tau, 0.0) / norms[nz]
    return m * scale


def normalize_columns_on_support(m, support, tol=1e-12):
    """Scale supported columns to unit l2 norm; columns off the support are zeroed."""
    m = np.asarray(m, dtype=float)
    idx = as_support(support, m.shape[1])
    out = np.zeros_like(m)
    if idx.size == 0:
        return out
    norms = np.linalg.norm(m[:, idx], axis=0)
    if (norms <= tol).any():
        bad = idx[norms <= tol]
        raise ValueError("degenerate (near-zero) supported columns at %s" % bad.tolist())
    out[:, idx] = m[:, idx] / norms
    return out
