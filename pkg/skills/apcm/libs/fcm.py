"""Fuzzy c-means, used to seed PCM and APCM."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

try:
    from .core import DataSet
    from .errors import ContractViolation
except ImportError:
    from core import DataSet
    from errors import ContractViolation

logger = logging.getLogger(__name__)

DEFAULT_Q = 2.0
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 100


@dataclass
class FcmResult:
    """Final FCM representatives and memberships (rows of u sum to 1)."""

    theta: np.ndarray
    u: np.ndarray
    q: float
    iterations: int
    converged: bool = False
    # Set when the data had fewer than m distinct points and the initial
    # representatives were sampled with replacement.
    sampled_with_replacement: bool = False

    @property
    def m(self) -> int:
        return self.theta.shape[0]


def fcm_memberships(points: np.ndarray, theta: np.ndarray, q: float) -> np.ndarray:
    """u_ij = [sum_k (d_ij / d_ik)^(2/(q-1))]^-1 with crisp rows for zero distances."""
    d2 = cdist(points, theta, "sqeuclidean")
    zero = d2 == 0.0
    crisp_rows = zero.any(axis=1)

    u = np.empty_like(d2)
    if np.any(~crisp_rows):
        rows = d2[~crisp_rows]
        # Scaled by the row minimum so the powers stay in (0, 1].
        ratio = (rows.min(axis=1, keepdims=True) / rows) ** (1.0 / (q - 1.0))
        u[~crisp_rows] = ratio / ratio.sum(axis=1, keepdims=True)
    if np.any(crisp_rows):
        first_zero = np.argmax(zero[crisp_rows], axis=1)
        crisp = np.zeros((first_zero.size, theta.shape[0]))
        crisp[np.arange(first_zero.size), first_zero] = 1.0
        u[crisp_rows] = crisp
    return u


def _fcm_centers(points: np.ndarray, u: np.ndarray, q: float, previous: np.ndarray) -> np.ndarray:
    weights = u ** q
    totals = weights.sum(axis=0)
    centers = previous.copy()
    # A representative with no weight (duplicate seeds on duplicated data) stays put.
    live = totals > 0.0
    centers[live] = (weights[:, live].T @ points) / totals[live][:, np.newaxis]
    return centers


def _initial_centers(points: np.ndarray, m: int, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
    distinct = np.unique(points, axis=0)
    if distinct.shape[0] >= m:
        picks = rng.choice(distinct.shape[0], size=m, replace=False)
        return distinct[np.sort(picks)].copy(), False
    logger.warning(
        "Only %d distinct points for %d clusters; sampling initial representatives with replacement",
        distinct.shape[0], m,
    )
    picks = rng.choice(distinct.shape[0], size=m, replace=True)
    return distinct[picks].copy(), True


def fcm_run(
    data: DataSet,
    m: int,
    q: float = DEFAULT_Q,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 42,
) -> FcmResult:
    """Run FCM from m distinct data points sampled uniformly with ``seed``.

    Stops when the largest representative displacement falls below ``tol`` or
    after ``max_iter`` iterations.
    """
    if m < 1 or m > data.n_points:
        raise ContractViolation(f"FCM needs 1 <= m <= N, got m={m}, N={data.n_points}")
    if q <= 1.0:
        raise ContractViolation(f"FCM fuzzifier q must exceed 1, got {q}")
    if tol <= 0 or max_iter < 1:
        raise ContractViolation(f"FCM needs tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}")

    points = data.points
    rng = np.random.default_rng(seed)
    theta, with_replacement = _initial_centers(points, m, rng)

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        u = fcm_memberships(points, theta, q)
        new_theta = _fcm_centers(points, u, q, theta)
        shift = float(np.max(np.linalg.norm(new_theta - theta, axis=1)))
        theta = new_theta
        logger.debug("FCM iteration %d: max shift %.3e", iterations, shift)
        if shift < tol:
            converged = True
            break

    u = fcm_memberships(points, theta, q)
    logger.info("FCM m=%d finished after %d iterations (converged=%s)", m, iterations, converged)
    return FcmResult(
        theta=theta,
        u=u,
        q=q,
        iterations=iterations,
        converged=converged,
        sampled_with_replacement=with_replacement,
    )
