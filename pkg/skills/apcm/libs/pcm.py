"""Classical possibilistic c-means with fixed scales estimated from FCM."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist, pdist, squareform

try:
    from .core import DataSet, data_diameter
    from .errors import ClusterCollapseError, ContractViolation, DegenerateDataError
    from .fcm import DEFAULT_Q, DEFAULT_TOL, FcmResult, fcm_run
    from .report import ClusteringReport, IterationRecord, build_report
except ImportError:
    from core import DataSet, data_diameter
    from errors import ClusterCollapseError, ContractViolation, DegenerateDataError
    from fcm import DEFAULT_Q, DEFAULT_TOL, FcmResult, fcm_run
    from report import ClusteringReport, IterationRecord, build_report

logger = logging.getLogger(__name__)

DEFAULT_K = 1.0
DEFAULT_MAX_ITER = 300
# Representatives closer than this fraction of the data diameter are reported as one cluster.
MERGE_FRACTION = 1e-3


@dataclass
class PcmState:
    """PCM iteration state; ``gamma`` is read-only and never changes during a run."""

    theta: np.ndarray
    u: np.ndarray
    gamma: np.ndarray
    K: float = DEFAULT_K
    t: int = 0


@dataclass
class MergedClusters:
    """Representatives after coincident groups are merged and empty groups dropped.

    ``groups[g]`` lists the original 0-based cluster indices behind output cluster g.
    """

    theta: np.ndarray
    gamma: np.ndarray
    labels: np.ndarray
    groups: list[list[int]]


def partition_conditions(u: np.ndarray) -> tuple[bool, bool, bool]:
    """Check u in [0, 1], a positive row maximum, and column sums strictly inside (0, N)."""
    n = u.shape[0]
    bounded = bool(np.all((u >= 0.0) & (u <= 1.0)))
    covered = bool(np.all(u.max(axis=1) > 0.0))
    totals = u.sum(axis=0)
    nondegenerate = bool(np.all((totals > 0.0) & (totals < n)))
    return bounded, covered, nondegenerate


def pcm_gamma_init(fcm: FcmResult, data: DataSet, K: float = DEFAULT_K) -> np.ndarray:
    """gamma_j = K * sum_i u_ij d_ij^2 / sum_i u_ij from an FCM partition of ``data``."""
    if K <= 0:
        raise ContractViolation(f"K must be positive, got {K}")
    if fcm.u.shape[0] != data.n_points:
        raise ContractViolation(f"FCM result covers {fcm.u.shape[0]} points, data has {data.n_points}")

    totals = fcm.u.sum(axis=0)
    if np.any(totals <= 0.0):
        raise ContractViolation(f"FCM columns with zero total membership: {np.flatnonzero(totals <= 0.0).tolist()}")
    d2 = cdist(data.points, fcm.theta, "sqeuclidean")
    return K * (fcm.u * d2).sum(axis=0) / totals


def pcm_update_u(data: DataSet, theta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """u_ij = exp(-d_ij^2 / gamma_j)."""
    d2 = cdist(data.points, theta, "sqeuclidean")
    return np.exp(-(d2 / gamma))


def pcm_update_theta(data: DataSet, u: np.ndarray) -> np.ndarray:
    """theta_j = sum_i u_ij x_i / sum_i u_ij."""
    totals = u.sum(axis=0)
    collapsed = np.flatnonzero(totals <= 0.0)
    if collapsed.size:
        raise ClusterCollapseError(collapsed.tolist())
    return (u.T @ data.points) / totals[:, np.newaxis]


def pcm_step(state: PcmState, data: DataSet) -> tuple[PcmState, float]:
    """One alternation: u from the current theta, then theta from that u. Returns the new state and max shift."""
    u = pcm_update_u(data, state.theta, state.gamma)
    theta = pcm_update_theta(data, u)
    shift = float(np.max(np.linalg.norm(theta - state.theta, axis=1)))
    return replace(state, theta=theta, u=u, t=state.t + 1), shift


def merge_coincident(theta: np.ndarray, gamma: np.ndarray, labels: np.ndarray, delta: float) -> MergedClusters:
    """Merge representatives closer than ``delta`` (single linkage) and drop groups owning no point.

    Merged groups report the mean of their members' theta and gamma; output
    clusters keep the order of their lowest original index.
    """
    m = theta.shape[0]
    if m > 1:
        close = squareform(pdist(theta)) < delta
        _, component = connected_components(close, directed=False)
    else:
        component = np.zeros(1, dtype=np.int64)

    _, first_member, group_of = np.unique(component, return_index=True, return_inverse=True)
    # np.unique sorts by component id; reorder by lowest member index
    order = np.argsort(first_member, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    group_of = rank[group_of]

    point_group = group_of[labels]
    owned = np.unique(point_group)
    new_labels = np.searchsorted(owned, point_group)

    groups = [np.flatnonzero(group_of == g).tolist() for g in owned]
    merged_theta = np.stack([theta[members].mean(axis=0) for members in groups])
    merged_gamma = np.array([gamma[members].mean() for members in groups])
    return MergedClusters(theta=merged_theta, gamma=merged_gamma, labels=new_labels, groups=groups)


def pcm_run(
    data: DataSet,
    m: int,
    K: float = DEFAULT_K,
    q: float = DEFAULT_Q,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 42,
    *,
    trace: bool = False,
    fcm: Optional[FcmResult] = None,
) -> ClusteringReport:
    """Run PCM from an FCM partition with m clusters.

    gamma stays fixed at its FCM-based estimate for the whole run. Coincident
    representatives are merged in the report; ``report.trace`` (when requested)
    keeps the unmerged per-iteration state.
    """
    if tol <= 0 or max_iter < 1:
        raise ContractViolation(f"PCM needs tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}")
    start = time.perf_counter()

    if fcm is None:
        fcm = fcm_run(data, m, q=q, seed=seed)
    elif fcm.m != m:
        raise ContractViolation(f"FCM result has {fcm.m} clusters, PCM asked for {m}")

    gamma = pcm_gamma_init(fcm, data, K)
    if np.any(gamma <= 0.0):
        raise DegenerateDataError("PCM scale gamma is zero; the data has no spread around an FCM representative")
    gamma.setflags(write=False)
    state = PcmState(theta=fcm.theta.copy(), u=fcm.u.copy(), gamma=gamma, K=K)
    records = [IterationRecord(t=0, theta=state.theta.copy(), u=state.u, gamma=gamma)] if trace else None

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        state, shift = pcm_step(state, data)
        logger.debug("PCM iteration %d: max shift %.3e", iterations, shift)
        if records is not None:
            records.append(IterationRecord(t=state.t, theta=state.theta.copy(), u=state.u, gamma=gamma))
        if shift < tol:
            converged = True
            break

    theta = state.theta
    u = pcm_update_u(data, theta, gamma)
    # argmax keeps the lowest index on ties
    labels = np.argmax(u, axis=1)
    merged = merge_coincident(theta, gamma, labels, MERGE_FRACTION * data_diameter(data.points))

    warnings = []
    if fcm.sampled_with_replacement:
        warnings.append("FCM initial representatives sampled with replacement")
    coincident = [group for group in merged.groups if len(group) > 1]
    if coincident:
        warnings.append(f"coincident clusters merged: {[[j + 1 for j in group] for group in coincident]}")
    if not converged:
        warnings.append(f"PCM stopped at max_iter={max_iter} before converging")

    elapsed_ms = (time.perf_counter() - start) * 1000.0
    logger.info("PCM m=%d -> m_final=%d after %d iterations", m, merged.theta.shape[0], iterations)
    return build_report(
        "pcm",
        data,
        merged.theta,
        merged.gamma,
        merged.labels,
        m_ini=m,
        iterations=iterations,
        elapsed_ms=elapsed_ms,
        q=q,
        K=K,
        converged=converged,
        warnings=warnings,
        trace=records,
    )
