"""External validation: Rand measure, success rate and mean centre distance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.metrics import rand_score
from sklearn.metrics.cluster import contingency_matrix

try:
    from .core import DataSet
    from .errors import ContractViolation, UndefinedMeasureError
except ImportError:
    from core import DataSet
    from errors import ContractViolation, UndefinedMeasureError


@dataclass(frozen=True)
class TruthCenters:
    """Ground-truth cluster means (generator means or per-class empirical means)."""

    centers: np.ndarray

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        if centers.ndim == 1:
            centers = centers.reshape(-1, 1)
        if centers.ndim != 2 or centers.shape[0] < 1:
            raise ContractViolation(f"TruthCenters needs at least one centre, got shape {centers.shape}")
        object.__setattr__(self, "centers", centers)

    @property
    def m_true(self) -> int:
        return self.centers.shape[0]


def _paired(labels, truth) -> tuple[np.ndarray, np.ndarray]:
    labels = np.asarray(labels).ravel()
    truth = np.asarray(truth).ravel()
    if labels.shape != truth.shape:
        raise ContractViolation(f"Label vectors differ in length: {labels.size} vs {truth.size}")
    return labels, truth


def rand_measure(labels, truth) -> float:
    """Percentage of point pairs on which the two partitions agree."""
    labels, truth = _paired(labels, truth)
    if labels.size < 2:
        raise UndefinedMeasureError(f"Rand measure needs at least 2 points, got {labels.size}")
    return 100.0 * float(rand_score(truth, labels))


def success_rate(labels, truth) -> float:
    """Percentage of points whose cluster maps to their true class.

    Each cluster maps to the class it shares most points with (several
    clusters may map to the same class); ties go to the lower class index.
    """
    labels, truth = _paired(labels, truth)
    if labels.size == 0:
        raise ContractViolation("Success rate needs at least one point")
    # rows: classes in ascending order, columns: clusters
    table = contingency_matrix(truth, labels)
    correct = int(table.max(axis=0).sum())
    return 100.0 * correct / labels.size


def mean_center_distance(theta, truth_centers: Union[TruthCenters, np.ndarray]) -> float:
    """Mean Euclidean distance between representatives and true centres.

    With at least as many representatives as true centres, each true centre is
    matched to its nearest representative; otherwise each representative is
    matched to its nearest true centre.
    """
    if not isinstance(truth_centers, TruthCenters):
        truth_centers = TruthCenters(truth_centers)
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim == 1:
        theta = theta.reshape(-1, truth_centers.centers.shape[1])
    if theta.shape[0] < 1:
        raise ContractViolation("Mean centre distance needs at least one representative")

    distances = cdist(theta, truth_centers.centers)
    if theta.shape[0] >= truth_centers.m_true:
        return float(distances.min(axis=0).mean())
    return float(distances.min(axis=1).mean())


def truth_centers_for(data: DataSet) -> Optional[TruthCenters]:
    """Generator means when known, else per-class means; None without truth."""
    if data.centers is not None:
        return TruthCenters(data.centers)
    if data.truth is None:
        return None
    means = np.stack([data.points[data.truth == c].mean(axis=0) for c in range(1, data.n_classes + 1)])
    return TruthCenters(means)
