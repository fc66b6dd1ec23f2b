"""Numerical checks of the APCM convergence and elimination properties.

Covers the l1/l2 bound between eta and the hard mean squared deviation, the
spherical u_1 = u_2 locus of two clusters, the contraction of the continuous
update toward the mean of an isotropic Gaussian, the one-dimensional cost
landscape and the elimination of one of two clusters on a single Gaussian.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np
import pandas as pd

try:
    from .core import DataSet
    from .errors import ContractViolation, DegenerateLocusError
except ImportError:
    from core import DataSet
    from errors import ContractViolation, DegenerateLocusError

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-12


class DeviationBoundCheck(NamedTuple):
    eta_sq: float
    gamma_prime: float
    holds: bool


def check_deviation_bounds(deviations) -> DeviationBoundCheck:
    """eta^2 <= gamma' <= n eta^2 for eta the mean and gamma' the mean square of ``deviations``."""
    deviations = np.asarray(deviations, dtype=np.float64).ravel()
    n = deviations.size
    if n < 1:
        raise ContractViolation("check_deviation_bounds needs at least one deviation")
    if np.any(deviations < 0):
        raise ContractViolation("Deviations must be non-negative")

    eta_sq = float(deviations.mean()) ** 2
    gamma_prime = float(np.mean(deviations * deviations))
    slack = BOUND_SLACK * max(eta_sq, gamma_prime)
    holds = eta_sq <= gamma_prime + slack and gamma_prime <= n * eta_sq + slack
    return DeviationBoundCheck(eta_sq=eta_sq, gamma_prime=gamma_prime, holds=bool(holds))


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float


def _oriented(theta1, theta2, eta1: float, eta2: float):
    theta1 = np.asarray(theta1, dtype=np.float64)
    theta2 = np.asarray(theta2, dtype=np.float64)
    if theta1.shape != theta2.shape:
        raise ContractViolation(f"Representatives differ in length: {theta1.shape} vs {theta2.shape}")
    if eta1 <= 0 or eta2 <= 0:
        raise ContractViolation(f"eta values must be positive, got {eta1}, {eta2}")
    if eta1 == eta2:
        raise DegenerateLocusError("Equal eta values: the u_1 = u_2 locus is a hyperplane")
    if eta1 < eta2:
        return theta2, theta1, eta2, eta1
    return theta1, theta2, eta1, eta2


def locus_sphere(theta1, theta2, eta1: float, eta2: float) -> Sphere:
    """Sphere on which two clusters are equally compatible.

    The pair is oriented so that eta1 > eta2; the sphere then encloses the
    representative with the smaller eta.
    """
    theta1, theta2, eta1, eta2 = _oriented(theta1, theta2, eta1, eta2)
    k = eta1 / eta2
    center = (k * theta2 - theta1) / (k - 1.0)
    radius = np.sqrt(k) / (k - 1.0) * float(np.linalg.norm(theta2 - theta1))
    return Sphere(center=center, radius=float(radius))


def locus_radius(theta1, theta2, eta1: float, eta2: float) -> float:
    """sqrt(eta1 eta2) / |eta1 - eta2| * ||theta2 - theta1||."""
    theta1, theta2, eta1, eta2 = _oriented(theta1, theta2, eta1, eta2)
    return float(np.sqrt(eta1 * eta2) / (eta1 - eta2) * np.linalg.norm(theta2 - theta1))


class LocusCheck(NamedTuple):
    max_residual: float
    mismatches: int
    checked: int


def trace_locus(theta1, theta2, eta1: float, eta2: float, n_directions: int = 256,
                rel_step: float = 1e-9, seed: int = 0) -> LocusCheck:
    """Trace the u_1 = u_2 level set against ``locus_sphere`` along random rays.

    On the sphere the exponents d_1^2/eta_1 and d_2^2/eta_2 must agree
    (``max_residual`` is their largest relative difference); a step of
    ``rel_step * radius`` inward must favour the smaller-eta cluster and the
    same step outward the other one. Exponents are compared instead of u so
    that underflow cannot hide the sign.
    """
    sphere = locus_sphere(theta1, theta2, eta1, eta2)
    theta1, theta2, eta1, eta2 = _oriented(theta1, theta2, eta1, eta2)
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(n_directions, sphere.center.size))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    def exponents(points):
        a = np.sum((points - theta1) ** 2, axis=1) / eta1
        b = np.sum((points - theta2) ** 2, axis=1) / eta2
        return a, b

    a, b = exponents(sphere.center + sphere.radius * directions)
    max_residual = float(np.max(np.abs(a - b) / (a + b)))

    a_in, b_in = exponents(sphere.center + sphere.radius * (1.0 - rel_step) * directions)
    a_out, b_out = exponents(sphere.center + sphere.radius * (1.0 + rel_step) * directions)
    # inside: u_2 > u_1, i.e. the smaller-eta exponent is smaller
    mismatches = int(np.sum(~(b_in < a_in)) + np.sum(~(b_out > a_out)))
    return LocusCheck(max_residual=max_residual, mismatches=mismatches, checked=2 * n_directions)


@dataclass
class FixedPointResult:
    trajectory: list[np.ndarray]
    contraction_est: Optional[float]
    # Contraction of the exact continuous update for an isotropic Gaussian.
    expected: float


def empirical_fixed_point(sigma: float, gamma: float, n_samples: int = 100_000, n_iters: int = 10,
                          seed: int = 42, theta0=None, dim: int = 2) -> FixedPointResult:
    """Iterate the gamma-fixed representative update on samples of N(0, sigma^2 I).

    Each step replaces theta by the mean of the samples weighted by
    exp(-||x - theta||^2 / gamma). For a Gaussian the exact update is linear,
    theta -> 2 sigma^2 / (2 sigma^2 + gamma) * theta, so the contraction is
    estimated from the first three steps, before sampling noise dominates.
    ``theta0`` defaults to 2 sigma along the first axis; starting at the
    origin gives ``contraction_est`` None.
    """
    if sigma <= 0 or gamma <= 0:
        raise ContractViolation(f"sigma and gamma must be positive, got {sigma}, {gamma}")
    if n_samples < 1 or n_iters < 1:
        raise ContractViolation("n_samples and n_iters must be at least 1")

    rng = np.random.default_rng(seed)
    samples = rng.normal(0.0, sigma, size=(n_samples, dim))
    if theta0 is None:
        theta = np.zeros(dim)
        theta[0] = 2.0 * sigma
    else:
        theta = np.asarray(theta0, dtype=np.float64).reshape(dim)

    trajectory = [theta.copy()]
    for _ in range(n_iters):
        weights = np.exp(-np.sum((samples - theta) ** 2, axis=1) / gamma)
        theta = weights @ samples / weights.sum()
        trajectory.append(theta)

    norms = [float(np.linalg.norm(point)) for point in trajectory]
    contraction_est = None
    if norms[0] > 0:
        ratios = [norms[t + 1] / norms[t] for t in range(min(3, n_iters)) if norms[t] > 0]
        contraction_est = float(np.mean(ratios))

    expected = 2.0 * sigma ** 2 / (2.0 * sigma ** 2 + gamma)
    logger.debug("Fixed point: contraction %s, exact %.6f", contraction_est, expected)
    return FixedPointResult(trajectory=trajectory, contraction_est=contraction_est, expected=expected)


def cost_landscape_1d(data: DataSet, eta_hat: float, alpha: float, grid) -> np.ndarray:
    """J(theta) = -(eta_hat^2 / alpha) * sum_i exp(-alpha (x_i - theta)^2 / eta_hat^2).

    The single-cluster cost with eta fixed at eta_hat.
    """
    if data.dim != 1:
        raise ContractViolation(f"cost_landscape_1d needs one-dimensional data, got l={data.dim}")
    if eta_hat <= 0 or alpha <= 0:
        raise ContractViolation(f"eta_hat and alpha must be positive, got {eta_hat}, {alpha}")
    grid = np.asarray(grid, dtype=np.float64).ravel()
    d2 = (grid[:, np.newaxis] - data.points[:, 0][np.newaxis, :]) ** 2
    return -(eta_hat ** 2 / alpha) * np.exp(-alpha * d2 / eta_hat ** 2).sum(axis=1)


def default_grid(data: DataSet, size: int = 2001) -> np.ndarray:
    """Evenly spaced grid over the data range widened by 10% on each side."""
    low, high = float(data.points.min()), float(data.points.max())
    margin = 0.1 * (high - low) or 1.0
    return np.linspace(low - margin, high + margin, size)


def find_local_minima(values) -> list[int]:
    """Indices of interior local minima; a flat run counts once, at its middle."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size < 3:
        return []
    # collapse runs of equal values
    starts = np.flatnonzero(np.concatenate(([True], np.diff(values) != 0)))
    ends = np.concatenate((starts[1:], [values.size])) - 1
    levels = values[starts]

    minima = []
    for r in range(1, levels.size - 1):
        if levels[r - 1] > levels[r] < levels[r + 1]:
            minima.append(int((starts[r] + ends[r]) // 2))
    return minima


def write_landscape_csv(grid, values, path: Union[str, Path]) -> Path:
    """Two columns, ``theta,J``, for external plotting."""
    path = Path(path)
    pd.DataFrame({"theta": np.asarray(grid).ravel(), "J": np.asarray(values).ravel()}).to_csv(
        path, index=False, float_format="%.17g"
    )
    return path


@dataclass
class EliminationTrace:
    """Two-representative APCM run on one cluster.

    ``distances[t]`` and ``radii[t]`` hold the representative distance and the
    u_1 = u_2 sphere radius for every iteration in which both clusters were
    alive (radius is inf when the two eta values are equal).
    """

    distances: list[float] = field(default_factory=list)
    radii: list[float] = field(default_factory=list)
    eliminated_at: Optional[int] = None
    m_final: int = 2


def elimination_trace(data: DataSet, alpha: float = 1.0, seed: int = 42, max_iter: int = 300) -> EliminationTrace:
    """Run APCM with two clusters and record how the pair evolves until one is removed."""
    try:
        from .apcm import apcm_run
    except ImportError:
        from apcm import apcm_run

    report = apcm_run(data, 2, alpha=alpha, max_iter=max_iter, seed=seed, trace=True)
    result = EliminationTrace(m_final=report.m_final)
    for record in report.trace:
        if record.m < 2:
            result.eliminated_at = record.t
            break
        eta1, eta2 = float(record.eta[0]), float(record.eta[1])
        result.distances.append(float(np.linalg.norm(record.theta[1] - record.theta[0])))
        if min(eta1, eta2) <= 0.0:
            result.radii.append(0.0)
        elif eta1 == eta2:
            result.radii.append(float("inf"))
        else:
            result.radii.append(locus_radius(record.theta[0], record.theta[1], eta1, eta2))
    logger.info("Elimination trace: m_final=%d, eliminated at iteration %s", result.m_final, result.eliminated_at)
    return result
