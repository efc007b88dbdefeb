"""Alternating-direction solvers for the low-rank representation program.

The main program is

    min_{Z,C}  ||Z||_* + lam * ||C||_{2,1}   s.t.  X = X Z + C,

solved by an inexact augmented-Lagrangian scheme on the splitting

    min ||J||_* + lam * ||C||_{2,1}   s.t.  X = X Z + C,  Z = J,

with multipliers Y1, Y2 and a growing penalty mu:

    J  <- svt(Z + Y2/mu, 1/mu)
    Z  <- (X^T X + I)^{-1} (X^T (X - C + Y1/mu) + J - Y2/mu)
    C  <- column_shrink(X - X Z + Y1/mu, lam/mu)
    Y1 += mu (X - X Z - C);  Y2 += mu (Z - J);  mu <- min(rho mu, mu_max)

stopping when both max-abs residuals ||X - XZ - C||_max and ||Z - J||_max
fall below tol_primal.

The implementation runs the identical iteration in reduced coordinates.
Write X = U S V^T (economy SVD at machine-precision rank r). With zero
initialization every iterate factors exactly as

    Z = V W,   J = V J',  Y2 = V Y2',   C = U C',  Y1 = U Y1'

with r x n cores: the Z-step inverse becomes the diagonal (S^2 + I)^{-1},
svt commutes with left multiplication by a column-orthonormal matrix, and
column_shrink only sees column norms, which U preserves. So the updates
above, rewritten on W, J', C', Y1', Y2', produce the same iterates as the
ambient iteration while every step costs O(rn) plus one r x n SVD.

The oracle variant constrains Z to a given row space V0 (Z = V0 V0^T Z) and
C to a given column support, by projecting after the Z- and C-steps. It runs
in V0-reduced coordinates for the Z side and keeps C ambient.
"""

import numpy as np
from dataclasses import dataclass

from .linalg import (_as_matrix, _svd_uv, as_support, column_shrink,
                     l21_norm, svt, SvdFactors)


@dataclass
class SolverConfig:
    """Solver parameters. lam is the trade-off weight of the column term."""

    lam: float
    mu0: float = 1e-6
    rho: float = 1.1
    mu_max: float = 1e10
    tol_primal: float = 1e-8
    max_iters: int = 5000

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if not self.rho > 1:
            raise ValueError("rho must exceed 1")
        if not 0 < self.mu0 < self.mu_max:
            raise ValueError("need 0 < mu0 < mu_max")
        if not self.tol_primal > 0:
            raise ValueError("tol_primal must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class LrrSolution:
    """Solver output.

    z, c solve the program to tolerance when converged is True.
    final_residuals is (||X - XZ - C||_max, ||Z - J||_max) at exit.
    z_svd caches an economy SVD of z (computed cheaply from the reduced
    core), so downstream rank/column-space work need not refactor an
    n x n matrix.
    """

    z: np.ndarray
    c: np.ndarray
    iterations: int
    converged: bool
    final_residuals: tuple
    objective: float
    z_svd: SvdFactors = None


@dataclass
class OracleSolution:
    """Output of the row-space- and support-constrained solve."""

    z_hat: np.ndarray
    c_hat: np.ndarray
    iterations: int
    converged: bool
    final_residuals: tuple
    objective: float


def _machine_rank_svd(x):
    """Economy SVD truncated at the machine-precision rank.

    The discarded tail is below max(d, n) * eps * sigma_0, so the truncated
    factors reproduce x far more tightly than any solver tolerance in use.
    """
    u, s, vt = _svd_uv(x)
    cutoff = max(x.shape) * np.finfo(float).eps * s[0]
    r = max(1, int(np.count_nonzero(s > cutoff)))
    return u[:, :r], s[:r], vt[:r]


def solve_lrr(x, config):
    """Solve min ||Z||_* + lam ||C||_{2,1} s.t. X = XZ + C.

    Parameters
    ----------
    x : array, shape (d, n)
        Data matrix, also used as the dictionary. Must be finite and nonzero.
    config : SolverConfig
        Penalty schedule, tolerance, and the trade-off weight lam.

    Returns
    -------
    LrrSolution
        Hitting max_iters without meeting the tolerance is reported through
        converged=False, not raised.
    """
    x = _as_matrix(x, "x")
    if not np.any(x):
        raise ValueError("x must be nonzero")
    d, n = x.shape
    u, s, vt = _machine_rank_svd(x)
    r = s.size
    xc = s[:, None] * vt          # r x n core of x
    denom = (s * s + 1.0)[:, None]
    tol = config.tol_primal
    # Sound pre-check for the ambient max-abs residuals: a column of the
    # reduced residual is the basis-transpose image of the ambient column,
    # so reduced_max <= sqrt(rows) * ambient_max. Only when the cheap check
    # passes can the ambient residuals be below tol.
    gate1 = np.sqrt(d) * tol
    gate2 = np.sqrt(n) * tol

    lam = config.lam
    mu = config.mu0
    w = np.zeros((r, n))
    j = np.zeros((r, n))
    cr = np.zeros((r, n))
    y1 = np.zeros((r, n))
    y2 = np.zeros((r, n))
    converged = False
    ambient = None
    iterations = 0

    for it in range(1, config.max_iters + 1):
        iterations = it
        tau = 1.0 / mu
        m = w + y2 / mu
        # ||M||_F <= tau bounds the spectral norm, so svt would return zero;
        # skipping the SVD in that regime is exact, not approximate.
        if np.linalg.norm(m) <= tau:
            j = np.zeros((r, n))
        else:
            j = svt(m, tau)
        w = (s[:, None] * (xc - cr + y1 / mu) + j - y2 / mu) / denom
        t = xc - s[:, None] * w
        cr = column_shrink(t + y1 / mu, lam / mu)
        r1 = t - cr
        r2 = w - j
        m1 = np.abs(r1).max()
        m2 = np.abs(r2).max()
        if m1 <= gate1 and m2 <= gate2:
            a1 = np.abs(u @ r1).max()
            a2 = np.abs(vt.T @ r2).max()
            if a1 <= tol and a2 <= tol:
                converged = True
                ambient = (a1, a2)
                break
        y1 += mu * r1
        y2 += mu * r2
        mu = min(config.rho * mu, config.mu_max)

    if ambient is None:
        ambient = (float(np.abs(u @ r1).max()), float(np.abs(vt.T @ r2).max()))

    z = vt.T @ w
    c = u @ cr
    uw, sw, vwt = _svd_uv(w)
    z_svd = SvdFactors(u=vt.T @ uw, sigma=sw, v=vwt.T,
                       rank=int(np.count_nonzero(sw > 1e-9 * sw[0])) if sw.size and sw[0] > 0 else 0)
    objective = float(sw.sum()) + lam * l21_norm(cr)
    return LrrSolution(z=z, c=c, iterations=iterations, converged=converged,
                       final_residuals=(float(ambient[0]), float(ambient[1])),
                       objective=objective, z_svd=z_svd)


def solve_oracle(x, v0, support0, config):
    """Solve the LRR program with ground-truth row-space and support constraints.

    Adds Z = V0 V0^T Z and C supported on support0 to the main program, by
    projecting after the Z- and C-steps of the same splitting. Intended for
    desk-scale instances: the per-iteration cost is O(d r0 n) with r0 the
    width of v0.
    """
    x = _as_matrix(x, "x")
    if not np.any(x):
        raise ValueError("x must be nonzero")
    d, n = x.shape
    v0 = np.asarray(v0, dtype=float)
    if v0.shape[0] != n:
        raise ValueError("v0 must have one row per column of x")
    r0 = v0.shape[1]
    support = as_support(support0, n)
    off = np.ones(n, dtype=bool)
    off[support] = False

    a = x @ v0                                     # d x r0
    # normal matrix of the reduced B-step: (X V0)^T (X V0) + I
    gram_plus = a.T @ a + np.eye(r0)

    lam = config.lam
    tol = config.tol_primal
    mu = config.mu0
    b = np.zeros((r0, n))
    j = np.zeros((r0, n))
    y2 = np.zeros((r0, n))
    c = np.zeros((d, n))
    y1 = np.zeros((d, n))
    converged = False
    iterations = 0
    a1 = a2 = np.inf

    for it in range(1, config.max_iters + 1):
        iterations = it
        tau = 1.0 / mu
        m = b + y2 / mu
        if np.linalg.norm(m) <= tau:
            j = np.zeros((r0, n))
        else:
            j = svt(m, tau)
        rhs = a.T @ (x - c + y1 / mu) + (j - y2 / mu)
        b = np.linalg.solve(gram_plus, rhs)
        xzb = a @ b
        c = column_shrink(x - xzb + y1 / mu, lam / mu)
        c[:, off] = 0.0
        r1 = x - xzb - c
        r2 = b - j
        a1 = np.abs(r1).max()
        a2 = np.abs(v0 @ r2).max()
        if a1 <= tol and a2 <= tol:
            converged = True
            break
        y1 += mu * r1
        y2 += mu * r2
        mu = min(config.rho * mu, config.mu_max)

    z_hat = v0 @ b
    objective = float(_svd_uv(b, compute_uv=False).sum()) + lam * l21_norm(c)
    return OracleSolution(z_hat=z_hat, c_hat=c, iterations=iterations,
                          converged=converged,
                          final_residuals=(float(a1), float(a2)),
                          objective=objective)
