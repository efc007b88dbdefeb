"""Command-line interface.

Subcommands: solve, gen, phase-transition, beta-sweep, segment, analyze,
certify. Matrix files are .csv or .mtx (see matrixio); reports are JSON.
Completed runs exit 0 even when they record non-successes (an unconverged
solve, a failed recovery, an inapplicable certificate); only I/O and
configuration errors exit nonzero.
"""

import argparse
import sys
import time
import numpy as np
from dataclasses import asdict
from pathlib import Path

from .analysis import (CertificateInapplicable, analyze_instance,
                       build_certificate, check_v0_in_rowspace,
                       lambda_window, verify_dual_conditions)
from .experiments import beta_sweep, phase_transition, segment_instance
from .linalg import spectral_norm
from .matrixio import (MatrixParseError, load_instance, load_matrix,
                       save_instance, save_json, save_matrix, save_roc_csv)
from .solver import SolverConfig, solve_lrr, solve_oracle
from .synth import GenSpec, generate


def _add_solver_args(p):
    p.add_argument("--mu0", type=float, default=1e-6)
    p.add_argument("--rho", type=float, default=1.1)
    p.add_argument("--mu-max", type=float, default=1e10)
    p.add_argument("--tol", type=float, default=1e-8,
                   help="primal feasibility tolerance (max-abs)")
    p.add_argument("--max-iters", type=int, default=5000)


def _solver_from_args(args, lam, tol=None):
    return SolverConfig(lam=lam, mu0=args.mu0, rho=args.rho,
                        mu_max=args.mu_max,
                        tol_primal=args.tol if tol is None else tol,
                        max_iters=args.max_iters)


def _add_genspec_args(p, include_seed=True):
    p.add_argument("--ambient-dim", type=int, default=500)
    p.add_argument("--num-subspaces", type=int, default=5)
    p.add_argument("--subspace-dim", type=int, default=5)
    p.add_argument("--samples-per-subspace", type=int, default=40)
    p.add_argument("--num-outliers", type=int, default=0)
    p.add_argument("--outlier-std-mode", choices=("matched", "explicit"),
                   default="matched")
    p.add_argument("--outlier-std", type=float, default=None)
    p.add_argument("--construction",
                   choices=("rotation-chain", "independent-random"),
                   default="rotation-chain")
    if include_seed:
        p.add_argument("--seed", type=int, default=0)


def _genspec_from_args(args):
    return GenSpec(ambient_dim=args.ambient_dim,
                   num_subspaces=args.num_subspaces,
                   subspace_dim=args.subspace_dim,
                   samples_per_subspace=args.samples_per_subspace,
                   num_outliers=args.num_outliers,
                   outlier_std_mode=args.outlier_std_mode,
                   outlier_std=args.outlier_std,
                   construction=args.construction,
                   seed=args.seed)


def _floats(text):
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return vals


def cmd_solve(args):
    x = load_matrix(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = _solver_from_args(args, args.lam)
    start = time.perf_counter()
    sol = solve_lrr(x, config)
    elapsed = time.perf_counter() - start
    z_file = out / ("z.%s" % args.format)
    c_file = out / ("c.%s" % args.format)
    save_matrix(z_file, sol.z)
    save_matrix(c_file, sol.c)
    save_json(out / "summary.json", {
        "input": str(args.input),
        "solver": asdict(config),
        "iterations": sol.iterations,
        "converged": sol.converged,
        "final_residuals": list(sol.final_residuals),
        "objective": sol.objective,
        "z_file": z_file.name,
        "c_file": c_file.name,
        "timing": {"seconds": elapsed},
    })
    if not sol.converged:
        print("warning: solver did not converge in %d iterations"
              % sol.iterations, file=sys.stderr)
    print(out / "summary.json")
    return 0


def cmd_gen(args):
    spec = _genspec_from_args(args)
    inst = generate(spec)
    save_instance(args.out, inst, spec, fmt=args.format)
    print(args.out)
    return 0


def cmd_phase_transition(args):
    report = phase_transition(args.gammas, args.lams, args.trials, args.seed,
                              base_spec=_genspec_from_args(args),
                              solver_config=_solver_from_args(args, 1.0),
                              workers=args.workers)
    save_json(args.out, report)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("gamma,lambda,successes,trials,success_rate\n")
            for cell in report["cells"]:
                fh.write("%.17g,%.17g,%d,%d,%.17g\n"
                         % (cell["gamma"], cell["lambda"], cell["successes"],
                            cell["trials"], cell["success_rate"]))
    print(args.out)
    return 0


def cmd_beta_sweep(args):
    report = beta_sweep(args.magnitudes, args.trials, args.seed,
                        base_spec=_genspec_from_args(args),
                        workers=args.workers)
    save_json(args.out, report)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("magnitude,mean_beta,mean_beta_bound\n")
            for cell in report["cells"]:
                fh.write("%.17g,%.17g,%.17g\n"
                         % (cell["magnitude"], cell["mean_beta"],
                            cell["mean_beta_bound"]))
    print(args.out)
    return 0


def _load_input(path):
    """Instance bundle directory, or a bare matrix file without ground truth."""
    p = Path(path)
    if p.is_dir():
        inst, meta = load_instance(p)
        return inst.x, inst.labels, inst.support0, inst, meta
    return load_matrix(p), None, None, None, None


def cmd_segment(args):
    x, labels, support0, _, _ = _load_input(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    report, full_labels, roc = segment_instance(
        x, args.k, args.lam, args.seed, labels=labels, support0=support0,
        solver_config=_solver_from_args(args, args.lam))
    elapsed = time.perf_counter() - start
    with open(out / "labels.csv", "w") as fh:
        fh.write("column,label\n")
        for i, lab in enumerate(full_labels):
            fh.write("%d,%d\n" % (i, lab))
    if roc is not None:
        save_roc_csv(out / "roc.csv", roc)
        report["roc_file"] = "roc.csv"
    report["labels_file"] = "labels.csv"
    report["timing"] = {"seconds": elapsed}
    save_json(out / "summary.json", report)
    print(out / "summary.json")
    return 0


def cmd_analyze(args):
    p = Path(args.input)
    if not p.is_dir():
        raise MatrixParseError("%s: analyze needs an instance bundle with "
                               "ground truth" % p)
    inst, _ = load_instance(p)
    x, v0 = inst.x, inst.v0
    d, n = x.shape
    x_norm = spectral_norm(x)
    diag = analyze_instance(x, v0, inst.support0, inst.x0, inst.c0)
    # Predicted (not measured) bound on the support Gram norm at lam_rec.
    psi_bound = diag.lambda_rec ** 2 * x_norm ** 2 * diag.gamma_observed * n

    report = {
        "d": d, "n": n, "r0": diag.r0, "gamma": diag.gamma_observed,
        "v0_rowspace_residual": check_v0_in_rowspace(x, v0),
        "beta": diag.beta,
        "mu": diag.mu,
        "gamma_star": diag.gamma_star,
        "gamma_exceeds_critical": diag.gamma_observed > diag.gamma_star,
        "lambda_recommended": diag.lambda_rec,
        "psi_bound_prediction": psi_bound,
        "theta_radians": diag.theta,
        "beta_lower_bound": diag.beta_lower,
        "beta_bound_note": diag.beta_lower_note,
        "lambda_window_predicted": None,
    }
    if psi_bound < 1:
        lo, hi = lambda_window(x_norm, n, diag.gamma_observed, diag.beta,
                               diag.mu, diag.r0, psi_bound)
        report["lambda_window_predicted"] = [lo, None if np.isinf(hi) else hi]
        if np.isinf(lo):
            report["lambda_window_predicted"] = None
    save_json(args.out, report)
    print(args.out)
    return 0


def cmd_certify(args):
    p = Path(args.input)
    if not p.is_dir():
        raise MatrixParseError("%s: certify needs an instance bundle with "
                               "ground truth" % p)
    inst, _ = load_instance(p)
    config = _solver_from_args(args, args.lam, tol=args.tol)
    oracle = solve_oracle(inst.x, inst.v0, inst.support0, config)
    report = {
        "lambda": args.lam,
        "oracle": {
            "iterations": oracle.iterations,
            "converged": oracle.converged,
            "final_residuals": list(oracle.final_residuals),
        },
        "applicable": None,
        "psi": None,
        "conditions": None,
        "all_passed": None,
    }
    try:
        cert = build_certificate(inst.x, oracle, inst.v0, inst.support0,
                                 args.lam)
    except CertificateInapplicable as exc:
        report["applicable"] = False
        report["reason"] = str(exc)
    else:
        checks = verify_dual_conditions(cert, inst.x, oracle, args.lam)
        report["applicable"] = True
        report["psi"] = cert.psi
        report["conditions"] = {
            key: asdict(getattr(checks, key))
            for key in ("s1", "s2", "s3", "s4", "s5")
        }
        report["all_passed"] = checks.all_passed()
    save_json(args.out, report)
    print(args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lrr",
        description="Low-rank representation: subspace segmentation and "
                    "outlier detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the program on a matrix file")
    p.add_argument("input")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "mtx"), default="csv")
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a synthetic instance bundle")
    _add_genspec_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "mtx"), default="csv")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("phase-transition",
                       help="success-rate grid over gamma and lambda")
    p.add_argument("--gammas", type=_floats, required=True)
    p.add_argument("--lams", type=_floats, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help="parallel cells (default: LRR_WORKERS or 1)")
    p.add_argument("--out", required=True)
    p.add_argument("--csv", default=None, help="also write a plotting CSV")
    _add_genspec_args(p, include_seed=False)
    _add_solver_args(p)
    p.set_defaults(func=cmd_phase_transition)

    p = sub.add_parser("beta-sweep",
                       help="mean conditioning over outlier magnitude")
    p.add_argument("--magnitudes", type=_floats, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", default=None)
    _add_genspec_args(p, include_seed=False)
    p.set_defaults(func=cmd_beta_sweep)

    p = sub.add_parser("segment",
                       help="solve, detect outliers, cluster, and score")
    p.add_argument("input", help="instance bundle directory or matrix file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_solver_args(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("analyze",
                       help="conditioning and recovery-condition report")
    p.add_argument("input", help="instance bundle directory")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify",
                       help="build and check the dual certificate")
    p.add_argument("input", help="instance bundle directory")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--out", required=True)
    _add_solver_args(p)
    # Certificate residuals inherit the oracle solve's accuracy, so certify
    # defaults to a tighter tolerance than plain solves.
    p.set_defaults(func=cmd_certify, tol=1e-10)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MatrixParseError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
