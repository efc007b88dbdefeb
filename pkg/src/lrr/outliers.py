"""Column-outlier scoring from the column-sparse term, and ROC evaluation."""

import warnings
import numpy as np
from dataclasses import dataclass
from sklearn.metrics import roc_curve

from .linalg import _as_matrix, as_support


@dataclass
class RocCurve:
    """ROC points as an (m, 2) array of (fpr, tpr) rows, plus the trapezoidal area."""

    points: np.ndarray
    auc: float


def score_columns(c):
    """Per-column l2 norms — the outlier evidence carried by each column."""
    c = _as_matrix(c, "c")
    return np.linalg.norm(c, axis=0)


def detect_outliers(c, x, rel_tol=1e-4):
    """Columns whose evidence reaches rel_tol times the matching column norm of x.

    Zero columns of x are never flagged (warned about if present, since the
    relative rule is undefined there).
    """
    c = _as_matrix(c, "c")
    x = _as_matrix(x, "x")
    if c.shape[1] != x.shape[1]:
        raise ValueError("c and x must have the same number of columns")
    x_norms = np.linalg.norm(x, axis=0)
    ok = x_norms > 0
    if not ok.all():
        warnings.warn("x has zero columns; they are excluded from outlier "
                      "detection")
    return np.flatnonzero(ok & (score_columns(c) >= rel_tol * x_norms))


def roc_auc(scores, truth):
    """ROC curve over all grouped score thresholds, outliers as positives.

    truth is the set of outlier column indices. Raises when it is empty or
    covers every column — with one class the curve is undefined.
    """
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 1:
        raise ValueError("scores must be a vector")
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    truth = as_support(truth, scores.size)
    if truth.size == 0 or truth.size == scores.size:
        raise ValueError("AUC undefined: need both outlier and authentic "
                         "columns in truth")
    y = np.zeros(scores.size, dtype=bool)
    y[truth] = True
    fpr, tpr, _ = roc_curve(y, scores, drop_intermediate=False)
    return RocCurve(points=np.column_stack([fpr, tpr]),
                    auc=float(np.trapezoid(tpr, fpr)))
