"""Shared fixtures: a handful of solved instances reused across modules.

Solving is the expensive part of this suite, so anything needed by more
than one test lives here at session scope. Converged solves routed through
record_solve land in SOLVE_LOG; the last acceptance test sweeps that log
to check the row-space invariant on everything the suite produced.
"""

import dataclasses

import pytest

from lrr import (
    GenSpec,
    SolverConfig,
    build_certificate,
    critical_gamma,
    generate,
    incoherence_mu,
    recommended_lambda,
    rwd_beta,
    solve_lrr,
    solve_oracle,
)

SOLVE_LOG = []

# One verdict line per acceptance check, replayed after the run summary so
# they stay visible when capture swallows passing tests' stdout.
ACCEPTANCE_LINES = []


def record_solve(tag, x, sol):
    if sol.converged:
        SOLVE_LOG.append((tag, x, sol))
    return sol


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def clean_instance():
    """Five 5-dim subspaces, 40 samples each, no outliers (d=500, n=200)."""
    return generate(GenSpec(seed=0))


@pytest.fixture(scope="session")
def clean_solution(clean_instance):
    sol = solve_lrr(clean_instance.x, SolverConfig(lam=1.0))
    return record_solve("clean/lam=1.0", clean_instance.x, sol)


@pytest.fixture(scope="session")
def outlier_instance():
    """Same geometry plus 50 matched-magnitude outliers (n=250, gamma=0.2)."""
    return generate(GenSpec(num_outliers=50, seed=0))


@pytest.fixture(scope="session")
def outlier_solution(outlier_instance):
    sol = solve_lrr(outlier_instance.x, SolverConfig(lam=0.3))
    return record_solve("outliers/lam=0.3", outlier_instance.x, sol)


@pytest.fixture(scope="session")
def outlier_oracle(outlier_instance):
    inst = outlier_instance
    cfg = SolverConfig(lam=0.3, tol_primal=1e-10)
    return solve_oracle(inst.x, inst.v0, inst.support0, cfg)


@dataclasses.dataclass
class CertCase:
    """One instance solved in the success regime with its certificate."""

    seed: int
    inst: object
    lam: float
    oracle: object
    cert: object
    beta: float
    mu: float
    gamma: float
    gamma_star: float
    r0: int


def build_cert_case(seed):
    """Solve a tiny well-conditioned instance and build its certificate.

    Two independent lines in R^200 with 300 samples each and a single
    outlier keep gamma a comfortable factor below the critical value, so
    the construction is applicable at the recommended lambda. The gentle
    penalty schedule (rho=1.05) matters: the stopping rule is primal-only,
    and with the default schedule the iterate exits while the dual pair is
    still ~1e-5 away, which would dominate every certificate residual.
    """
    spec = GenSpec(ambient_dim=200, num_subspaces=2, subspace_dim=1,
                   samples_per_subspace=300, num_outliers=1,
                   construction="independent-random", seed=seed)
    inst = generate(spec)
    n = inst.x.shape[1]
    gamma = len(inst.support0) / n
    beta = rwd_beta(inst.x, inst.v0)
    r0 = inst.v0.shape[1]
    mu = incoherence_mu(inst.v0, n, gamma)
    gamma_star = critical_gamma(beta, mu, r0)
    lam = recommended_lambda(inst.x, gamma_star)
    cfg = SolverConfig(lam=lam, tol_primal=1e-10, rho=1.05)
    oracle = solve_oracle(inst.x, inst.v0, inst.support0, cfg)
    cert = build_certificate(inst.x, oracle, inst.v0, inst.support0, lam)
    return CertCase(seed, inst, lam, oracle, cert, beta, mu, gamma,
                    gamma_star, r0)


@pytest.fixture(scope="session")
def cert_family():
    return [build_cert_case(seed) for seed in range(5)]
