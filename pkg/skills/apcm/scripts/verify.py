"""Numerical verification suites for the deviation bound, the locus sphere,
the Gaussian fixed point and two-cluster elimination."""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

_lib_path = Path(__file__).parent.parent / "libs"
if str(_lib_path) not in sys.path:
    sys.path.insert(0, str(_lib_path))

import numpy as np

from datagen import gen_single_gaussian
from theory import check_deviation_bounds, elimination_trace, empirical_fixed_point, trace_locus

logger = logging.getLogger(__name__)

SUITES = ("bounds", "sphere", "fixed-point", "elimination")


@dataclass
class VerifyResult:
    suite: str
    passed: bool
    detail: str

    def line(self) -> str:
        mark = "✓ PASS" if self.passed else "✗ FAIL"
        return f"{mark}  {self.suite}: {self.detail}"


def verify_deviation_bounds(trials: int = 1000, seed: int = 42) -> VerifyResult:
    """eta^2 <= gamma' <= n eta^2 on random non-negative deviation vectors."""
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(trials):
        n = int(rng.integers(1, 51))
        if not check_deviation_bounds(rng.exponential(size=n)).holds:
            failures += 1
    return VerifyResult("bounds", failures == 0, f"{trials - failures}/{trials} vectors satisfy the bound")


def verify_locus_sphere(configs: int = 100, seed: int = 42, tol: float = 1e-9) -> VerifyResult:
    """The u_1 = u_2 level set coincides with the computed sphere on random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    mismatches = 0
    for index in range(configs):
        dim = int(rng.integers(2, 5))
        theta1, theta2 = rng.uniform(-10.0, 10.0, size=(2, dim))
        eta2 = float(rng.uniform(0.2, 5.0))
        # keep eta1 / eta2 away from 1, where the sphere degenerates into a plane
        eta1 = eta2 * float(rng.uniform(1.2, 6.0))
        if rng.random() < 0.5:
            theta1, theta2, eta1, eta2 = theta2, theta1, eta2, eta1
        located = trace_locus(theta1, theta2, eta1, eta2, rel_step=tol, seed=seed + index)
        worst = max(worst, located.max_residual)
        mismatches += located.mismatches
    passed = worst < tol and mismatches == 0
    return VerifyResult("sphere", passed, f"{configs} configurations, max residual {worst:.2e}, sign mismatches {mismatches}")


def verify_fixed_point(sigma: float = 1.0, gamma: float = 2.0, n_samples: int = 100_000, seed: int = 42,
                  rel_tol: float = 0.05) -> VerifyResult:
    """Contraction toward the Gaussian mean and stability of the mean itself."""
    moving = empirical_fixed_point(sigma, gamma, n_samples=n_samples, seed=seed)
    resting = empirical_fixed_point(sigma, gamma, n_samples=n_samples, seed=seed, theta0=np.zeros(2))
    drift = max(float(np.linalg.norm(point)) for point in resting.trajectory)
    drift_limit = 10.0 * sigma / np.sqrt(n_samples)

    contraction_ok = abs(moving.contraction_est - moving.expected) <= rel_tol * moving.expected
    passed = contraction_ok and moving.contraction_est < 1.0 and drift <= drift_limit
    return VerifyResult(
        "fixed-point",
        passed,
        f"contraction {moving.contraction_est:.4f} (exact {moving.expected:.4f}), "
        f"drift from 0 {drift:.2e} (limit {drift_limit:.2e})",
    )


def verify_elimination(seeds: Sequence[int] = tuple(range(10)), alpha: float = 1.0, n_points: int = 1000) -> VerifyResult:
    """Two clusters on one isotropic Gaussian end with a single cluster."""
    outcomes = []
    for seed in seeds:
        trace = elimination_trace(gen_single_gaussian(seed, n=n_points), alpha=alpha, seed=seed)
        outcomes.append(trace.m_final == 1)
        logger.info("seed %d: m_final=%d eliminated at %s", seed, trace.m_final, trace.eliminated_at)
    kept_one = sum(outcomes)
    return VerifyResult("elimination", kept_one == len(outcomes), f"m_final=1 on {kept_one}/{len(outcomes)} seeds")


def run_suites(suites: Iterable[str], trials: int = 1000, sigma: float = 1.0, gamma: float = 2.0,
               n_samples: int = 100_000, seed: int = 42) -> list[VerifyResult]:
    results = []
    for suite in suites:
        if suite == "bounds":
            results.append(verify_deviation_bounds(trials, seed))
        elif suite == "sphere":
            results.append(verify_locus_sphere(seed=seed))
        elif suite == "fixed-point":
            results.append(verify_fixed_point(sigma, gamma, n_samples, seed))
        elif suite == "elimination":
            results.append(verify_elimination())
        else:
            raise ValueError(f"Unknown suite: {suite}. Available: [{', '.join(SUITES)}]")
    return results
