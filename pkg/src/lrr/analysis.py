"""Recovery conditions, success checks, and dual certificates.

Three groups of tools:

* Instance conditioning — the relative well-definedness beta of a data
  matrix against a target row space, its lower bound from principal angles,
  the incoherence mu of the row-space basis, the critical outlier fraction
  those imply, and the trade-off weight recommended for it.

* Recovery verification — compare a solver output against ground truth:
  spectral distance between recovered and true row-space projectors, and
  exact detection of the outlier support by relative column-norm threshold.

* Dual certificates — construct, from an oracle solution, the closed-form
  dual pair and check the five optimality/uniqueness conditions (column- and
  row-space alignment, support agreement, strict spectral slack off the
  tangent space, strict column-norm slack off the support).
"""

import warnings
import numpy as np
from dataclasses import dataclass

from .linalg import (_as_matrix, as_support, l2inf_norm,
                     normalize_columns_on_support, project_column_space,
                     project_columns, project_T, spectral_norm,
                     support_complement, svd)
from .outliers import detect_outliers


class CertificateInapplicable(ValueError):
    """The certificate construction's premises fail on this instance."""


def check_v0_in_rowspace(x, v0):
    """Spectral norm of the part of v0 outside the row space of x."""
    x = _as_matrix(x, "x")
    v0 = _as_matrix(v0, "v0")
    f = svd(x)
    vr = f.v_r
    return spectral_norm(v0 - vr @ (vr.T @ v0))


def rwd_beta(x, v0):
    """Relative well-definedness of x against the row space v0.

    beta = 1 / (||x|| * ||S^-1 V^T v0||) with x = U S V^T at numerical rank.
    Warns when v0 is not contained in the row space of x (the quantity is
    still returned, computed against the projected part).
    """
    x = _as_matrix(x, "x")
    v0 = _as_matrix(v0, "v0")
    if v0.shape[0] != x.shape[1]:
        raise ValueError("v0 must have one row per column of x")
    resid = check_v0_in_rowspace(x, v0)
    if resid > 1e-6:
        warnings.warn("v0 is not in the row space of x (residual %.3g); "
                      "beta is computed against the projected part" % resid)
    f = svd(x)
    m = (f.v_r.T @ v0) / f.sigma_r[:, None]
    return float(1.0 / (f.sigma[0] * spectral_norm(m)))


def smallest_principal_angle(a, b):
    """Smallest principal angle (radians) between the column spaces of a and b."""
    fa = svd(_as_matrix(a, "a"))
    fb = svd(_as_matrix(b, "b"))
    if fa.rank == 0 or fb.rank == 0:
        raise ValueError("a zero matrix has no column space")
    cos = min(1.0, spectral_norm(fa.u_r.T @ fb.u_r))
    return float(np.arccos(cos))


def beta_lower_bound(x0, c0):
    """Angle-based lower bound on beta from the clean/outlier split.

    sin(theta) / (cond(x0) * (1 + ||c0|| / ||x0||)), with theta the smallest
    principal angle between the column spaces of c0 and x0 and cond the
    ratio of extreme positive singular values of x0. Raises when the two
    column spaces intersect, where the bound degenerates to zero and carries
    no information.
    """
    x0 = _as_matrix(x0, "x0")
    c0 = _as_matrix(c0, "c0")
    f0 = svd(x0)
    if f0.rank == 0:
        raise ValueError("x0 must be nonzero")
    cond = f0.sigma[0] / f0.sigma_r[-1]
    if not np.any(c0):
        return 1.0 / cond
    theta = smallest_principal_angle(c0, x0)
    if np.cos(theta) >= 1.0 - 1e-12:
        raise ValueError("column spaces of c0 and x0 intersect; "
                         "the angle bound is not applicable")
    return float(np.sin(theta) / (cond * (1.0 + spectral_norm(c0) / f0.sigma[0])))


def incoherence_mu(v0, n, gamma):
    """Incoherence of the row-space basis v0 over the (1-gamma)n authentic columns."""
    v0 = _as_matrix(v0, "v0")
    if v0.shape[0] != n:
        raise ValueError("v0 must have n rows")
    if not 0 <= gamma < 1:
        raise ValueError("gamma must lie in [0, 1)")
    r0 = v0.shape[1]
    row_max = (v0 * v0).sum(axis=1).max()
    return float(row_max * (1.0 - gamma) * n / r0)


def critical_gamma(beta, mu, r0):
    """Largest outlier fraction with guaranteed recovery at the recommended weight."""
    if beta <= 0 or mu <= 0 or r0 < 1:
        raise ValueError("need beta > 0, mu > 0, r0 >= 1")
    t = 324.0 * beta * beta / (49.0 * (11.0 + 4.0 * beta) ** 2 * mu * r0)
    return float(t / (1.0 + t))


def recommended_lambda(x, gamma_star):
    """Trade-off weight tuned to the critical outlier fraction."""
    x = _as_matrix(x, "x")
    if not gamma_star > 0:
        raise ValueError("gamma_star must be positive")
    return float(3.0 / (7.0 * spectral_norm(x) * np.sqrt(gamma_star * x.shape[1])))


def lambda_window(x_norm, n, gamma, beta, mu, r0, psi):
    """Interval of trade-off weights with certified exact recovery.

    Returns (lo, hi); lo is +inf when the interval is empty (the outlier
    fraction is too large for the given conditioning). hi is +inf at
    gamma = 0.
    """
    if not 0 <= gamma < 1:
        raise ValueError("gamma must lie in [0, 1)")
    if not 0 <= psi < 1:
        raise ValueError("psi must lie in [0, 1)")
    root = np.sqrt(mu * r0 / (1.0 - gamma))
    denom = beta * (1.0 - psi) - (1.0 + beta) * np.sqrt(gamma) * root
    lo = (1.0 - psi) * root / (x_norm * np.sqrt(n) * denom) if denom > 0 else np.inf
    hi = ((1.0 - psi) / (x_norm * np.sqrt(gamma * n) * (2.0 - psi))
          if gamma > 0 else np.inf)
    return float(lo), float(hi)


@dataclass
class RecoveryDiagnostics:
    """Conditioning summary of one instance against its ground truth."""
    beta: float
    mu: float
    gamma_star: float
    lambda_rec: float
    gamma_observed: float
    r0: int
    theta: float = None          # principal angle; None when c0 is zero-free info
    beta_lower: float = None     # angle bound; None when not applicable
    beta_lower_note: str = None  # reason the bound was skipped
    psi: float = None            # filled in only when a certificate was built


def analyze_instance(x, v0, support0, x0=None, c0=None):
    """Compute the recovery-condition quantities for one instance.

    The angle-based lower bound and theta need the clean/outlier split; they
    are left as None (with a note) when x0/c0 are missing or the bound's
    independence premise fails.
    """
    x = _as_matrix(x, "x")
    v0 = _as_matrix(v0, "v0")
    n = x.shape[1]
    support = as_support(support0, n)
    gamma = support.size / n
    r0 = v0.shape[1]
    beta = rwd_beta(x, v0)
    mu = incoherence_mu(v0, n, gamma)
    gamma_star = critical_gamma(beta, mu, r0)
    diag = RecoveryDiagnostics(beta=beta, mu=mu, gamma_star=gamma_star,
                               lambda_rec=recommended_lambda(x, gamma_star),
                               gamma_observed=float(gamma), r0=r0)
    if x0 is None or c0 is None:
        diag.beta_lower_note = "clean/outlier split not provided"
        return diag
    try:
        diag.beta_lower = beta_lower_bound(x0, c0)
    except ValueError as exc:
        diag.beta_lower_note = str(exc)
        return diag
    c0 = np.asarray(c0, dtype=float)
    diag.theta = (smallest_principal_angle(c0, x0) if np.any(c0)
                  else float(np.pi / 2))
    return diag


@dataclass
class RecoveryVerdict:
    """Outcome of comparing a solution against ground truth."""

    rowspace_error: float
    detected_support: np.ndarray
    support_exact: bool
    success: bool


def _projector_distance(u_star, v0):
    # For orthonormal bases of equal width the spectral distance of the
    # projectors is the sine of the largest principal angle; with unequal
    # widths it is exactly 1.
    if u_star.shape[1] != v0.shape[1]:
        return 1.0
    if u_star.shape[1] == 0:
        return 0.0
    sv = np.linalg.svd(u_star.T @ v0, compute_uv=False)
    smin = min(1.0, sv[-1])
    return float(np.sqrt(max(0.0, 1.0 - smin * smin)))


def check_exact_recovery(sol, v0, support0, x, rank_rel_tol=1e-4,
                         support_rel_tol=1e-4):
    """Judge a solution: row space recovered and outlier support exact?

    The recovered column space of z is read at relative rank threshold
    rank_rel_tol — aligned with the success tolerance, so solver-tolerance
    noise in the trailing singular values cannot inflate the rank. A column
    is detected as an outlier when its norm in c reaches support_rel_tol
    times the matching column norm of x; zero columns of x are never
    flagged (with a warning if any exist).
    """
    v0 = _as_matrix(v0, "v0")
    x = _as_matrix(x, "x")
    n = x.shape[1]
    support0 = as_support(support0, n)

    f = sol.z_svd if getattr(sol, "z_svd", None) is not None else svd(sol.z)
    if f.sigma.size and f.sigma[0] > 0:
        r_star = int(np.count_nonzero(f.sigma > rank_rel_tol * f.sigma[0]))
    else:
        r_star = 0
    u_star = f.u[:, :r_star]
    rowspace_error = _projector_distance(u_star, v0)

    detected = detect_outliers(sol.c, x, rel_tol=support_rel_tol)
    support_exact = detected.size == support0.size and np.array_equal(
        detected, support0)
    return RecoveryVerdict(rowspace_error=float(rowspace_error),
                           detected_support=detected,
                           support_exact=bool(support_exact),
                           success=bool(rowspace_error < 1e-4 and support_exact))


def psi_of_instance(v_bar, support0):
    """Spectral norm of the support Gram of the aligned row-space basis."""
    v_bar = _as_matrix(v_bar, "v_bar")
    support0 = as_support(support0, v_bar.shape[0])
    if support0.size == 0:
        return 0.0
    rows = v_bar[support0, :]
    return float(spectral_norm(rows.T @ rows))


@dataclass
class DualCertificate:
    """Closed-form dual pair for an oracle solution.

    v_bar is the aligned row-space basis, h the column-normalized outlier
    profile, g its support Gram in v_bar coordinates with psi = ||g||, and
    q = q_main built from q1 (support part) and q2 (off-support correction).
    u_hat/v_hat are the singular factors of the oracle's z at structural
    rank. lam is the weight the certificate was built for.
    """

    v_bar: np.ndarray
    h: np.ndarray
    g: np.ndarray
    psi: float
    q: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    u_hat: np.ndarray
    v_hat: np.ndarray
    lam: float


def build_certificate(x, oracle, v0, support0, lam):
    """Construct the dual certificate from an oracle solution.

    Raises CertificateInapplicable when the oracle's column space has not
    aligned with v0 (the aligned basis fails orthonormality) or when the
    support Gram reaches spectral norm 1, where the off-support correction
    series diverges.
    """
    x = _as_matrix(x, "x")
    v0 = _as_matrix(v0, "v0")
    n = x.shape[1]
    support0 = as_support(support0, n)
    if not lam > 0:
        raise ValueError("lam must be positive")

    # Structural rank of the oracle z: its trailing singular values sit at
    # the solver tolerance, far below the leading ones, so a loose relative
    # cut separates them cleanly.
    fz = svd(oracle.z_hat, rank_rel_tol=1e-6)
    u_hat, v_hat = fz.u_r, fz.v_r

    v_bar = v_hat @ (u_hat.T @ v0)
    gram_gap = spectral_norm(v_bar.T @ v_bar - np.eye(v0.shape[1]))
    if gram_gap > 1e-4:
        raise CertificateInapplicable(
            "aligned basis is not orthonormal (gap %.3g); the oracle column "
            "space does not match v0" % gram_gap)

    h = normalize_columns_on_support(oracle.c_hat, support0)

    if support0.size:
        rows = v_bar[support0, :]
        g = rows.T @ rows
    else:
        g = np.zeros((v0.shape[1], v0.shape[1]))
    psi = float(spectral_norm(g))
    if psi >= 1.0:
        raise CertificateInapplicable("support Gram has spectral norm %.6g "
                                      ">= 1; certificate not applicable" % psi)

    xth = x.T @ h
    q1 = lam * (v0 @ (v0.T @ xth))
    corr = (xth @ v_bar) @ np.linalg.solve(
        np.eye(g.shape[0]) - g, v_bar.T)
    corr = project_columns(support_complement(support0, n), corr)
    q2 = lam * (corr - v0 @ (v0.T @ corr))

    f = svd(x)
    rhs = v0 @ v_bar.T + lam * xth - q1 - q2
    q = f.u_r @ ((f.v_r.T @ rhs) / f.sigma_r[:, None])
    return DualCertificate(v_bar=v_bar, h=h, g=g, psi=psi, q=q, q1=q1, q2=q2,
                           u_hat=u_hat, v_hat=v_hat, lam=float(lam))


@dataclass
class ConditionCheck:
    name: str
    value: float
    bound: float
    passed: bool


@dataclass
class DualConditionResults:
    s1: ConditionCheck
    s2: ConditionCheck
    s3: ConditionCheck
    s4: ConditionCheck
    s5: ConditionCheck

    def all_passed(self):
        return all(c.passed for c in (self.s1, self.s2, self.s3,
                                      self.s4, self.s5))


def verify_dual_conditions(cert, x, oracle, lam, rel_tol=1e-6):
    """Check the five dual conditions for (z_hat, c_hat) against cert.q.

    The three equality conditions are residuals measured in spectral norm
    and allowed rel_tol times the magnitude of their targets; the two
    inequality conditions are strict, reported with their measured values
    against the bounds 1 and lam.
    """
    x = _as_matrix(x, "x")
    n = x.shape[1]
    support0 = as_support(np.flatnonzero(
        np.linalg.norm(cert.h, axis=0) > 0), n)
    u_hat, v_hat, q = cert.u_hat, cert.v_hat, cert.q

    xtq = x.T @ q
    uvt = u_hat @ v_hat.T
    s1_val = spectral_norm(project_column_space(u_hat, xtq) - uvt)
    s2_val = spectral_norm((xtq @ v_hat) @ v_hat.T - uvt)
    s3_val = spectral_norm(project_columns(support0, q) - lam * cert.h)
    s3_scale = max(1.0, lam * spectral_norm(cert.h))
    s4_val = spectral_norm(xtq - project_T(u_hat, v_hat, xtq))
    s5_val = l2inf_norm(project_columns(support_complement(support0, n), q))

    return DualConditionResults(
        s1=ConditionCheck("column-space alignment", float(s1_val),
                          rel_tol, s1_val <= rel_tol),
        s2=ConditionCheck("row-space alignment", float(s2_val),
                          rel_tol, s2_val <= rel_tol),
        s3=ConditionCheck("support agreement", float(s3_val),
                          rel_tol * s3_scale, s3_val <= rel_tol * s3_scale),
        s4=ConditionCheck("tangent-complement slack", float(s4_val),
                          1.0, s4_val < 1.0),
        s5=ConditionCheck("off-support column slack", float(s5_val),
                          float(lam), s5_val < lam),
    )
