"""Low-rank representation: subspace segmentation and outlier detection.

Solve min ||Z||_* + lam ||C||_{2,1} s.t. X = XZ + C with the data as its own
dictionary, recover the row space of the clean samples and the support of
the column outliers, analyze when that recovery is exact, and certify it
through the dual conditions.
"""

from .linalg import (SvdFactors, as_support, column_shrink, l21_norm,
                     l2inf_norm, normalize_columns_on_support, nuclear_norm,
                     project_T, project_column_space, project_columns,
                     project_row_space, project_row_space_left,
                     spectral_norm, support_complement, svd, svt)
from .solver import (LrrSolution, OracleSolution, SolverConfig, solve_lrr,
                     solve_oracle)
from .synth import (GenSpec, ProblemInstance, generate,
                    generate_disjoint_dependent, mean_abs_sample_magnitude)
from .analysis import (CertificateInapplicable, ConditionCheck,
                       DualCertificate, DualConditionResults,
                       RecoveryDiagnostics, RecoveryVerdict, analyze_instance,
                       beta_lower_bound, build_certificate,
                       check_exact_recovery, check_v0_in_rowspace,
                       critical_gamma, incoherence_mu, lambda_window,
                       psi_of_instance, recommended_lambda, rwd_beta,
                       smallest_principal_angle, verify_dual_conditions)
from .segmentation import accuracy, sim_affinity, spectral_cluster
from .outliers import RocCurve, detect_outliers, roc_auc, score_columns
from .matrixio import (MatrixParseError, load_instance, load_matrix,
                       save_instance, save_matrix)
from .experiments import (beta_sweep, outliers_for_gamma, phase_transition,
                          segment_instance, trial_seed)

__version__ = "0.1.0"

__all__ = [
    "SvdFactors", "as_support", "column_shrink", "l21_norm", "l2inf_norm",
    "normalize_columns_on_support", "nuclear_norm", "project_T",
    "project_column_space", "project_columns", "project_row_space",
    "project_row_space_left", "spectral_norm", "support_complement", "svd",
    "svt",
    "LrrSolution", "OracleSolution", "SolverConfig", "solve_lrr",
    "solve_oracle",
    "GenSpec", "ProblemInstance", "generate", "generate_disjoint_dependent",
    "mean_abs_sample_magnitude",
    "CertificateInapplicable", "ConditionCheck", "DualCertificate",
    "DualConditionResults", "RecoveryDiagnostics", "RecoveryVerdict",
    "analyze_instance", "beta_lower_bound", "build_certificate",
    "check_exact_recovery", "check_v0_in_rowspace", "critical_gamma",
    "incoherence_mu", "lambda_window", "psi_of_instance",
    "recommended_lambda", "rwd_beta", "smallest_principal_angle",
    "verify_dual_conditions",
    "accuracy", "sim_affinity", "spectral_cluster",
    "RocCurve", "detect_outliers", "roc_auc", "score_columns",
    "MatrixParseError", "load_instance", "load_matrix", "save_instance",
    "save_matrix",
    "beta_sweep", "outliers_for_gamma", "phase_transition",
    "segment_instance", "trial_seed",
]
