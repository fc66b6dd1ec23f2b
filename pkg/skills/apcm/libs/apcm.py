"""Adaptive possibilistic c-means.

Each cluster carries a scale eta_j, the mean absolute deviation of the points
most compatible with it; gamma_j = (eta_hat / alpha) * eta_j where eta_hat is
the smallest initial eta. A cluster that is the most compatible cluster of no
point is removed, so the run starts from an overestimate m_ini and returns the
number of clusters it kept.

Iteration order: update U, update theta, label points by argmax, eliminate
unlabelled clusters, adapt eta from the same labels.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

try:
    from .core import DataSet, data_diameter
    from .errors import ContractViolation, DegenerateDataError
    from .fcm import DEFAULT_Q, DEFAULT_TOL, FcmResult, fcm_run
    from .pcm import pcm_update_theta
    from .report import ClusteringReport, IterationRecord, build_report
    from .theory import check_deviation_bounds
except ImportError:
    from core import DataSet, data_diameter
    from errors import ContractViolation, DegenerateDataError
    from fcm import DEFAULT_Q, DEFAULT_TOL, FcmResult, fcm_run
    from pcm import pcm_update_theta
    from report import ClusteringReport, IterationRecord, build_report
    from theory import check_deviation_bounds

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 1.0
DEFAULT_MAX_ITER = 300
# Clusters whose eta falls to this fraction of the data diameter are eliminated.
ETA_FLOOR_FRACTION = 1e-12


@dataclass
class ApcmState:
    """APCM iteration state. ``label`` holds 0-based column indices."""

    theta: np.ndarray
    u: np.ndarray
    eta: np.ndarray
    eta_hat: float
    alpha: float
    label: np.ndarray
    m: int
    t: int = 0
    eta_floor: float = 0.0

    @property
    def gamma(self) -> np.ndarray:
        return (self.eta_hat / self.alpha) * self.eta

    @property
    def live(self) -> np.ndarray:
        """Mask of clusters whose eta is above the floor."""
        return self.eta > self.eta_floor


def apcm_init(data: DataSet, m_ini: int, alpha: float, fcm: FcmResult) -> ApcmState:
    """Take theta from FCM and set eta_j to the FCM-weighted mean (unsquared) distance."""
    if alpha <= 0:
        raise ContractViolation(f"alpha must be positive, got {alpha}")
    if fcm.m != m_ini:
        raise ContractViolation(f"FCM result has {fcm.m} clusters, APCM asked for m_ini={m_ini}")
    if fcm.u.shape[0] != data.n_points:
        raise ContractViolation(f"FCM result covers {fcm.u.shape[0]} points, data has {data.n_points}")

    distances = cdist(data.points, fcm.theta, "euclidean")
    totals = fcm.u.sum(axis=0)
    if np.any(totals <= 0.0):
        raise DegenerateDataError(
            f"FCM clusters {(np.flatnonzero(totals <= 0.0) + 1).tolist()} have no membership; the data has no spread"
        )
    eta = (fcm.u * distances).sum(axis=0) / totals
    if np.any(eta <= 0.0):
        raise DegenerateDataError(
            f"Initial eta is zero for clusters {(np.flatnonzero(eta <= 0.0) + 1).tolist()}; the data has no spread"
        )

    return ApcmState(
        theta=fcm.theta.copy(),
        u=fcm.u.copy(),
        eta=eta,
        eta_hat=float(eta.min()),
        alpha=float(alpha),
        label=assign_labels(fcm.u),
        m=m_ini,
        eta_floor=ETA_FLOOR_FRACTION * data_diameter(data.points),
    )


def apcm_update_u(state: ApcmState, data: DataSet) -> np.ndarray:
    """u_ij = exp(-(alpha / eta_hat) * d_ij^2 / eta_j); columns of floored clusters stay 0."""
    d2 = cdist(data.points, state.theta, "sqeuclidean")
    u = np.zeros_like(d2)
    live = state.live
    u[:, live] = np.exp(-(state.alpha / state.eta_hat) * (d2[:, live] / state.eta[live]))
    return u


def assign_labels(u: np.ndarray) -> np.ndarray:
    """Index of the most compatible cluster per point, lowest index on ties."""
    if u.ndim != 2 or u.shape[1] < 1:
        raise ContractViolation(f"Need an N x m compatibility matrix with m >= 1, got shape {u.shape}")
    return np.argmax(u, axis=1)


def eliminate_clusters(state: ApcmState, label: np.ndarray) -> ApcmState:
    """Drop clusters no point is labelled with and renumber the rest in order."""
    keep = np.zeros(state.m, dtype=bool)
    keep[np.unique(label)] = True
    if not keep.any():
        raise ContractViolation("Cluster elimination would remove every cluster")
    if keep.all():
        return replace(state, label=label)

    renumber = np.cumsum(keep) - 1
    removed = np.flatnonzero(~keep)
    logger.info("Iteration %d: eliminated clusters %s", state.t, (removed + 1).tolist())
    return replace(
        state,
        theta=state.theta[keep],
        u=state.u[:, keep],
        eta=state.eta[keep],
        label=renumber[label],
        m=int(keep.sum()),
    )


def _cluster_deviations(points: np.ndarray, label: np.ndarray, m: int) -> list[np.ndarray]:
    deviations = []
    for j in range(m):
        members = points[label == j]
        if members.shape[0] == 0:
            raise ContractViolation(f"Cluster {j + 1} has no labelled points; eliminate before adapting eta")
        mu = members.mean(axis=0)
        deviations.append(np.linalg.norm(members - mu, axis=1))
    return deviations


def adapt_eta(state: ApcmState, data: DataSet, label: np.ndarray) -> np.ndarray:
    """eta_j = mean distance of the points labelled j from their mean."""
    return np.array([dev.mean() for dev in _cluster_deviations(data.points, label, state.m)])


def _count_bound_violations(state: ApcmState, data: DataSet) -> int:
    violations = 0
    for j, deviations in enumerate(_cluster_deviations(data.points, state.label, state.m)):
        check = check_deviation_bounds(deviations)
        if not check.holds:
            violations += 1
            logger.warning(
                "Iteration %d cluster %d: eta^2=%.6g, gamma'=%.6g violate the deviation bounds",
                state.t, j + 1, check.eta_sq, check.gamma_prime,
            )
    return violations


def apcm_step(state: ApcmState, data: DataSet) -> tuple[ApcmState, float]:
    """One full iteration; returns the new state and the largest shift of a surviving representative."""
    u = apcm_update_u(state, data)
    theta = state.theta.copy()
    usable = u.sum(axis=0) > 0.0
    theta[usable] = pcm_update_theta(data, u[:, usable])

    scores = u.copy()
    scores[:, ~state.live] = -1.0
    label = assign_labels(scores)

    survivors = np.unique(label)
    shift = float(np.max(np.linalg.norm(theta[survivors] - state.theta[survivors], axis=1)))

    moved = replace(state, theta=theta, u=u, t=state.t + 1)
    reduced = eliminate_clusters(moved, label)
    return replace(reduced, eta=adapt_eta(reduced, data, reduced.label)), shift


def apcm_run(
    data: DataSet,
    m_ini: int,
    alpha: float = DEFAULT_ALPHA,
    q: float = DEFAULT_Q,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 42,
    *,
    audit: bool = False,
    trace: bool = False,
    fcm: Optional[FcmResult] = None,
) -> ClusteringReport:
    """Run APCM from an FCM partition with m_ini clusters.

    Args:
        audit: Check eta_j^2 <= gamma'_j <= n_j eta_j^2 for every cluster at
            every iteration and report the number of violations.
        trace: Keep an IterationRecord per iteration in ``report.trace``.
        fcm: Reuse an FCM result (it must have m_ini clusters) instead of
            running FCM with ``seed``.
    """
    if m_ini < 1 or m_ini > data.n_points:
        raise ContractViolation(f"APCM needs 1 <= m_ini <= N, got m_ini={m_ini}, N={data.n_points}")
    if tol <= 0 or max_iter < 1:
        raise ContractViolation(f"APCM needs tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}")
    start = time.perf_counter()

    if fcm is None:
        fcm = fcm_run(data, m_ini, q=q, seed=seed)
    state = apcm_init(data, m_ini, alpha, fcm)
    eta_hat = state.eta_hat
    logger.debug("APCM init: eta=%s eta_hat=%.6g", np.array2string(state.eta, precision=4), eta_hat)

    records = None
    if trace:
        records = [IterationRecord(
            t=0, theta=state.theta.copy(), u=state.u, gamma=state.gamma, eta=state.eta.copy(), labels=state.label,
        )]

    violations = 0
    converged = False
    while state.t < max_iter:
        state, shift = apcm_step(state, data)
        if state.eta_hat != eta_hat:
            raise ContractViolation("eta_hat changed during the run")
        if audit:
            violations += _count_bound_violations(state, data)
        if records is not None:
            records.append(IterationRecord(
                t=state.t, theta=state.theta.copy(), u=state.u, gamma=state.gamma, eta=state.eta.copy(),
                labels=state.label,
            ))
        logger.debug("APCM iteration %d: m=%d max shift %.3e", state.t, state.m, shift)

        if not state.live.any():
            logger.warning("Every eta fell below the floor at iteration %d; stopping", state.t)
            break
        # A floored cluster still needs one more pass to be eliminated.
        if shift < tol and state.live.all():
            converged = True
            break

    warnings = []
    if fcm.sampled_with_replacement:
        warnings.append("FCM initial representatives sampled with replacement")
    if not converged:
        warnings.append(f"APCM stopped at iteration {state.t} before converging")

    elapsed_ms = (time.perf_counter() - start) * 1000.0
    logger.info("APCM m_ini=%d alpha=%g -> m_final=%d after %d iterations", m_ini, alpha, state.m, state.t)
    return build_report(
        "apcm",
        data,
        state.theta,
        state.gamma,
        state.label,
        m_ini=m_ini,
        iterations=state.t,
        elapsed_ms=elapsed_ms,
        q=fcm.q,
        alpha=alpha,
        converged=converged,
        bound_violations=violations if audit else None,
        warnings=warnings,
        trace=records,
    )
