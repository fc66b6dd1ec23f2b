"""Run outputs: per-iteration records and the clustering report with its JSON/CSV writers."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

try:
    from .core import DataSet
    from .errors import ContractViolation
    from .metrics import mean_center_distance, rand_measure, success_rate, truth_centers_for
except ImportError:
    from core import DataSet
    from errors import ContractViolation
    from metrics import mean_center_distance, rand_measure, success_rate, truth_centers_for

logger = logging.getLogger(__name__)

# Serialised in this order; also the set of keys load_json accepts.
REPORT_FIELDS = (
    "algorithm", "m_ini", "m_final", "alpha", "K", "q", "iterations", "elapsed_ms",
    "rm", "sr", "md", "theta", "gamma", "labels", "converged", "bound_violations", "warnings",
)


@dataclass(eq=False)
class IterationRecord:
    """Snapshot after iteration ``t`` (t=0 is the FCM initialisation).

    ``labels`` are 0-based column indices of ``u``.
    """

    t: int
    theta: np.ndarray
    u: np.ndarray
    gamma: np.ndarray
    eta: Optional[np.ndarray] = None
    labels: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return self.theta.shape[0]


@dataclass(eq=False)
class ClusteringReport:
    """Outcome of one clustering run. Labels are 1-based."""

    algorithm: str
    m_ini: int
    m_final: int
    labels: np.ndarray
    theta: np.ndarray
    gamma: np.ndarray
    iterations: int
    elapsed_ms: float
    q: float
    alpha: Optional[float] = None
    K: Optional[float] = None
    rm: Optional[float] = None
    sr: Optional[float] = None
    md: Optional[float] = None
    converged: bool = False
    bound_violations: Optional[int] = None
    warnings: list[str] = field(default_factory=list)
    trace: Optional[list[IterationRecord]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.theta = np.asarray(self.theta, dtype=np.float64)
        self.gamma = np.asarray(self.gamma, dtype=np.float64)
        if not 1 <= self.m_final <= self.m_ini:
            raise ContractViolation(f"Report needs 1 <= m_final <= m_ini, got m_final={self.m_final}, m_ini={self.m_ini}")
        if self.theta.shape[0] != self.m_final or self.gamma.shape != (self.m_final,):
            raise ContractViolation(
                f"Report theta {self.theta.shape} / gamma {self.gamma.shape} disagree with m_final={self.m_final}"
            )
        used = np.unique(self.labels)
        if not np.array_equal(used, np.arange(1, self.m_final + 1)):
            raise ContractViolation(f"Report labels must use every cluster 1..{self.m_final}, got {used.tolist()}")

    def summary_line(self) -> str:
        """One line in the column order m_ini, m_final, RM, SR, MD, Iter, Time."""

        def fmt(value: Optional[float], spec: str) -> str:
            return "-" if value is None else format(value, spec)

        return (
            f"{self.algorithm:<5} m_ini={self.m_ini:<4} m_final={self.m_final:<4} "
            f"RM={fmt(self.rm, '.2f'):<7} SR={fmt(self.sr, '.2f'):<7} MD={fmt(self.md, '.4f'):<8} "
            f"iter={self.iterations:<4} time={self.elapsed_ms / 1000.0:.3f}s"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "m_ini": self.m_ini,
            "m_final": self.m_final,
            "alpha": self.alpha,
            "K": self.K,
            "q": self.q,
            "iterations": self.iterations,
            "elapsed_ms": self.elapsed_ms,
            "rm": self.rm,
            "sr": self.sr,
            "md": self.md,
            "theta": self.theta.tolist(),
            "gamma": self.gamma.tolist(),
            "labels": self.labels.tolist(),
            "converged": self.converged,
            "bound_violations": self.bound_violations,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "ClusteringReport":
        unknown = sorted(set(payload) - set(REPORT_FIELDS))
        if unknown:
            raise ValueError(f"Report contains unknown fields: {', '.join(unknown)}")
        missing = [name for name in ("algorithm", "m_ini", "m_final", "theta", "gamma", "labels") if name not in payload]
        if missing:
            raise ValueError(f"Report is missing required fields: {', '.join(missing)}")

        values = dict(payload)
        m_final = values["m_final"]
        values["theta"] = np.asarray(values["theta"], dtype=np.float64).reshape(m_final, -1)
        values.setdefault("iterations", 0)
        values.setdefault("elapsed_ms", 0.0)
        values.setdefault("q", 2.0)
        values["warnings"] = list(values.get("warnings") or [])
        return cls(**values)

    def save_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")
        logger.info("Report written to %s", path)
        return path

    @classmethod
    def load_json(cls, path: Union[str, Path]) -> "ClusteringReport":
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        if not isinstance(payload, dict):
            raise ValueError(f"Report file must hold a JSON object: {path}")
        return cls.from_dict(payload)

    def save_labels_csv(self, path: Union[str, Path]) -> Path:
        """Write ``index,label`` rows, both 1-based."""
        path = Path(path)
        frame = pd.DataFrame({"index": np.arange(1, self.labels.size + 1), "label": self.labels})
        frame.to_csv(path, index=False)
        return path


def build_report(
    algorithm: str,
    data: DataSet,
    theta: np.ndarray,
    gamma: np.ndarray,
    labels: np.ndarray,
    *,
    m_ini: int,
    iterations: int,
    elapsed_ms: float,
    q: float,
    alpha: Optional[float] = None,
    K: Optional[float] = None,
    converged: bool = False,
    bound_violations: Optional[int] = None,
    warnings: Optional[list[str]] = None,
    trace: Optional[list[IterationRecord]] = None,
) -> ClusteringReport:
    """Assemble a report from 0-based contiguous labels, adding metrics when truth is known."""
    labels = np.asarray(labels, dtype=np.int64)
    rm = sr = md = None
    if data.truth is not None:
        sr = success_rate(labels, data.truth)
        if data.n_points >= 2:
            rm = rand_measure(labels, data.truth)
        centers = truth_centers_for(data)
        if centers is not None:
            md = mean_center_distance(theta, centers)

    return ClusteringReport(
        algorithm=algorithm,
        m_ini=m_ini,
        m_final=int(np.asarray(theta).shape[0]),
        labels=labels + 1,
        theta=theta,
        gamma=gamma,
        iterations=iterations,
        elapsed_ms=elapsed_ms,
        q=q,
        alpha=alpha,
        K=K,
        rm=rm,
        sr=sr,
        md=md,
        converged=converged,
        bound_violations=bound_violations,
        warnings=list(warnings or []),
        trace=trace,
    )
