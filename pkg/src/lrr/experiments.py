"""Seeded experiment harness.

Phase-transition grids (success rate over outlier fraction x trade-off
weight), conditioning sweeps over outlier magnitude, and end-to-end
segmentation of a single instance. Every trial owns an RNG stream derived
from (master seed, cell index, trial index), so results are independent of
worker count and execution order; reports echo their full configuration and
keep wall-clock timings in a separate key so the numeric payload is
reproducible byte for byte.
"""

import os
import time
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace

from .analysis import beta_lower_bound, check_exact_recovery, rwd_beta
from .linalg import support_complement
from .outliers import detect_outliers, roc_auc, score_columns
from .segmentation import sim_affinity, spectral_cluster
from .solver import SolverConfig, solve_lrr
from .synth import GenSpec, generate


def trial_seed(master_seed, cell_index, trial_index):
    """64-bit seed for one trial, statistically independent across indices."""
    ss = np.random.SeedSequence((master_seed, cell_index, trial_index))
    return int(ss.generate_state(1, np.uint64)[0])


def resolve_workers(workers=None):
    """Worker count: explicit argument, else LRR_WORKERS, else 1."""
    if workers is None:
        workers = int(os.environ.get("LRR_WORKERS", "1"))
    if workers < 1:
        raise ValueError("workers must be positive")
    return workers


def outliers_for_gamma(n_authentic, gamma):
    """Outlier count giving fraction gamma with the authentic count fixed."""
    if not 0 <= gamma < 1:
        raise ValueError("gamma must lie in [0, 1)")
    return int(round(n_authentic * gamma / (1.0 - gamma)))


def _map_cells(fn, payloads, workers):
    if workers == 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, payloads))


def _solver_dict(config):
    d = asdict(config)
    d.pop("lam")
    return d


def _phase_cell(payload):
    base = GenSpec(**payload["genspec"])
    gamma = payload["gamma"]
    lam = payload["lambda"]
    n_auth = base.num_subspaces * base.samples_per_subspace
    num_outliers = outliers_for_gamma(n_auth, gamma)
    start = time.perf_counter()
    successes = 0
    solver_failures = 0
    for t in range(payload["trials"]):
        spec = replace(base, num_outliers=num_outliers,
                       seed=trial_seed(payload["seed"], payload["cell_index"], t))
        inst = generate(spec)
        try:
            sol = solve_lrr(inst.x, SolverConfig(lam=lam, **payload["solver"]))
            verdict = check_exact_recovery(sol, inst.v0, inst.support0, inst.x)
        except np.linalg.LinAlgError:
            solver_failures += 1
            continue
        if not sol.converged:
            solver_failures += 1
        successes += verdict.success
    elapsed = time.perf_counter() - start
    cell = {
        "gamma": gamma,
        "lambda": lam,
        "num_outliers": num_outliers,
        "trials": payload["trials"],
        "successes": successes,
        "success_rate": successes / payload["trials"],
        "solver_failures": solver_failures,
    }
    return cell, elapsed


def phase_transition(gamma_grid, lam_grid, trials, seed, base_spec=None,
                     solver_config=None, workers=None):
    """Success-rate grid over outlier fraction and trade-off weight.

    Each cell generates ``trials`` fresh instances (authentic sample count
    fixed by the base spec, outliers appended to hit the cell's gamma),
    solves, and judges exact recovery. Per-cell failures of any kind count
    as non-success; nothing raises per cell.
    """
    gamma_grid = [float(g) for g in gamma_grid]
    lam_grid = [float(l) for l in lam_grid]
    if not gamma_grid or not lam_grid or trials < 1:
        raise ValueError("grids must be nonempty and trials positive")
    base = base_spec if base_spec is not None else GenSpec()
    solver = _solver_dict(solver_config if solver_config is not None
                          else SolverConfig(lam=1.0))
    payloads = []
    for gi, gamma in enumerate(gamma_grid):
        for li, lam in enumerate(lam_grid):
            payloads.append({
                "cell_index": gi * len(lam_grid) + li,
                "gamma": gamma, "lambda": lam, "trials": trials,
                "seed": seed, "genspec": asdict(base), "solver": solver,
            })
    start = time.perf_counter()
    results = _map_cells(_phase_cell, payloads, resolve_workers(workers))
    return {
        "kind": "phase-transition",
        "gamma_grid": gamma_grid,
        "lambda_grid": lam_grid,
        "trials": trials,
        "seed": seed,
        "genspec": asdict(base),
        "solver": solver,
        "cells": [cell for cell, _ in results],
        "timing": {"cell_seconds": [t for _, t in results],
                   "total_seconds": time.perf_counter() - start},
    }


def _beta_cell(payload):
    base = GenSpec(**payload["genspec"])
    target = payload["magnitude"]
    start = time.perf_counter()
    betas = []
    bounds = []
    violations = 0
    for t in range(payload["trials"]):
        spec = replace(base, seed=trial_seed(payload["seed"],
                                             payload["cell_index"], t))
        inst = generate(spec)
        # Rescale the outliers to the target spectral-norm ratio ||C0||/||X0||.
        norm_x0 = np.linalg.norm(inst.x0, 2)
        norm_c0 = np.linalg.norm(inst.c0, 2)
        c0 = inst.c0 * (target * norm_x0 / norm_c0)
        x = inst.x0 + c0
        beta = rwd_beta(x, inst.v0)
        bound = beta_lower_bound(inst.x0, c0)
        betas.append(beta)
        bounds.append(bound)
        violations += beta < bound - 1e-10
    elapsed = time.perf_counter() - start
    cell = {
        "magnitude": target,
        "trials": payload["trials"],
        "mean_beta": float(np.mean(betas)),
        "mean_beta_bound": float(np.mean(bounds)),
        "bound_violations": int(violations),
    }
    return cell, elapsed


def beta_sweep(magnitude_grid, trials, seed, base_spec=None, workers=None):
    """Mean conditioning beta as outlier magnitude grows, at outlier fraction 1/2.

    Each instance is drawn with matched-magnitude outliers, then the outlier
    block is rescaled so ||C0|| / ||X0|| hits the grid value exactly (zero
    magnitude reduces to the outlier-free matrix). Also records the mean of
    the angle-based lower bound and counts any per-trial violations of it.
    """
    magnitude_grid = [float(m) for m in magnitude_grid]
    if not magnitude_grid or trials < 1:
        raise ValueError("grid must be nonempty and trials positive")
    if min(magnitude_grid) < 0:
        raise ValueError("magnitudes must be nonnegative")
    base = base_spec if base_spec is not None else GenSpec()
    n_auth = base.num_subspaces * base.samples_per_subspace
    base = replace(base, num_outliers=n_auth, outlier_std_mode="matched",
                   outlier_std=None)
    payloads = [{"cell_index": i, "magnitude": m, "trials": trials,
                 "seed": seed, "genspec": asdict(base)}
                for i, m in enumerate(magnitude_grid)]
    start = time.perf_counter()
    results = _map_cells(_beta_cell, payloads, resolve_workers(workers))
    return {
        "kind": "beta-sweep",
        "magnitude_grid": magnitude_grid,
        "gamma": 0.5,
        "trials": trials,
        "seed": seed,
        "genspec": asdict(base),
        "cells": [cell for cell, _ in results],
        "timing": {"cell_seconds": [t for _, t in results],
                   "total_seconds": time.perf_counter() - start},
    }


def segment_instance(x, k, lam, seed, labels=None, support0=None,
                     solver_config=None):
    """Solve, split outliers from samples, cluster the samples, and score.

    Returns (report, full_labels, roc) where full_labels marks detected
    outliers with -1 and roc is None without two-class ground truth. When
    truth labels are given, ACC counts correctly clustered samples over all
    truly authentic columns — samples wrongly flagged as outliers count
    against it.
    """
    solver = solver_config if solver_config is not None else SolverConfig(lam=lam)
    if solver.lam != lam:
        solver = replace(solver, lam=lam)
    sol = solve_lrr(x, solver)
    n = x.shape[1]
    detected = detect_outliers(sol.c, x)
    authentic = support_complement(detected, n)
    if authentic.size == 0:
        raise ValueError("every column was flagged as an outlier; nothing "
                         "to cluster")
    f = sol.z_svd
    r_star = int(np.count_nonzero(f.sigma > 1e-4 * f.sigma[0])) \
        if f.sigma.size and f.sigma[0] > 0 else 0
    u_star = f.u[:, :max(1, r_star)]
    w = sim_affinity(u_star[authentic])
    pred = spectral_cluster(w, k, seed)
    full_labels = np.full(n, -1, dtype=int)
    full_labels[authentic] = pred

    report = {
        "k": int(k),
        "lambda": float(lam),
        "seed": int(seed),
        "converged": bool(sol.converged),
        "iterations": int(sol.iterations),
        "num_detected_outliers": int(detected.size),
        "detected_outliers": [int(i) for i in detected],
        "acc": None,
        "acc_denominator": "all_authentic",
        "auc": None,
    }

    if labels is not None:
        labels = np.asarray(labels)
        truly = labels >= 0
        both = truly & (full_labels >= 0)
        correct = 0
        for cl in np.unique(full_labels[both]):
            members = labels[both & (full_labels == cl)]
            _, counts = np.unique(members, return_counts=True)
            correct += int(counts.max())
        report["acc"] = correct / int(truly.sum()) if truly.any() else None

    roc = None
    if support0 is not None:
        support0 = np.asarray(support0, dtype=int)
        if 0 < support0.size < n:
            roc = roc_auc(score_columns(sol.c), support0)
            report["auc"] = roc.auc
    return report, full_labels, roc
