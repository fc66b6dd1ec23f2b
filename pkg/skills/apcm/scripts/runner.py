"""Experiment runner: loads data, runs an algorithm and writes the outputs."""

from __future__ import annotations

import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

# Add libs directory to path
_lib_path = Path(__file__).parent.parent / "libs"
if str(_lib_path) not in sys.path:
    sys.path.insert(0, str(_lib_path))

import numpy as np
import pandas as pd

from apcm import apcm_init, apcm_run
from core import DataSet, data_diameter, load_csv, write_csv
from datagen import generate
from errors import ApcmError
from fcm import fcm_run
from pcm import MERGE_FRACTION, merge_coincident, pcm_gamma_init, pcm_run
from report import ClusteringReport, build_report
from theory import cost_landscape_1d, default_grid, find_local_minima, write_landscape_csv

try:
    from .config import RunConfig
except ImportError:
    from config import RunConfig

logger = logging.getLogger(__name__)


def _failure(error: Exception, code: str) -> dict:
    return {"success": False, "error": str(error), "code": code}


class ExperimentRunner:
    """Run clustering experiments described by RunConfig objects."""

    def load_data(self, config: RunConfig) -> DataSet:
        if config.input is not None:
            return load_csv(config.input, has_header=config.has_header, label_column=config.label_column)
        return generate(config.gen, seed=config.seed)

    def cluster(self, data: DataSet, config: RunConfig) -> ClusteringReport:
        """Run the configured algorithm on ``data``."""
        if config.algorithm == "apcm":
            return apcm_run(
                data, config.m_ini, alpha=config.effective_alpha, q=config.q, tol=config.tol,
                max_iter=config.effective_max_iter, seed=config.seed, audit=config.audit,
            )
        if config.algorithm == "pcm":
            return pcm_run(
                data, config.m_ini, K=config.effective_K, q=config.q, tol=config.tol,
                max_iter=config.effective_max_iter, seed=config.seed,
            )
        return self._fcm_report(data, config)

    def _fcm_report(self, data: DataSet, config: RunConfig) -> ClusteringReport:
        start = time.perf_counter()
        result = fcm_run(data, config.m_ini, q=config.q, tol=config.tol,
                         max_iter=config.effective_max_iter, seed=config.seed)
        # gamma with K=1: radius^2 of the circle drawn around each representative
        gamma = pcm_gamma_init(result, data, 1.0)
        labels = np.argmax(result.u, axis=1)
        merged = merge_coincident(result.theta, gamma, labels, MERGE_FRACTION * data_diameter(data.points))
        warnings = []
        if result.sampled_with_replacement:
            warnings.append("FCM initial representatives sampled with replacement")
        return build_report(
            "fcm", data, merged.theta, merged.gamma, merged.labels,
            m_ini=config.m_ini, iterations=result.iterations,
            elapsed_ms=(time.perf_counter() - start) * 1000.0, q=result.q,
            converged=result.converged, warnings=warnings,
        )

    def run(self, config: RunConfig) -> dict:
        """Run one configuration and write the report and labels when paths are set.

        Returns ``{"success": True, "data": {...}}`` or
        ``{"success": False, "error": ..., "code": ...}``.
        """
        try:
            data = self.load_data(config)
            report = self.cluster(data, config)
            if config.output:
                report.save_json(config.output)
            if config.labels_out:
                report.save_labels_csv(config.labels_out)
        except OSError as e:
            return _failure(e, "IO_ERROR")
        except ApcmError as e:
            return _failure(e, "DATA_ERROR")

        return {
            "success": True,
            "data": {
                "dataset": data.name,
                "summary": report.summary_line(),
                "report": report,
            },
        }

    def sweep(self, config: RunConfig, m_values: Sequence[int], alphas: Sequence[float],
              output: Optional[str] = None) -> dict:
        """APCM over an (m_ini, alpha) grid; the FCM start is shared by every alpha of one m_ini."""
        rows = []
        try:
            data = self.load_data(config)
            for m_ini in m_values:
                fcm = fcm_run(data, m_ini, q=config.q, seed=config.seed)
                for alpha in alphas:
                    report = apcm_run(
                        data, m_ini, alpha=alpha, q=config.q, tol=config.tol,
                        max_iter=config.effective_max_iter, seed=config.seed, fcm=fcm,
                    )
                    rows.append({"m_ini": m_ini, "alpha": alpha, "m_final": report.m_final,
                                 "iterations": report.iterations})
                    logger.info("sweep m_ini=%d alpha=%g -> m_final=%d", m_ini, alpha, report.m_final)
            table = pd.DataFrame(rows, columns=["m_ini", "alpha", "m_final", "iterations"])
            if output:
                table.to_csv(output, index=False)
        except OSError as e:
            return _failure(e, "IO_ERROR")
        except ApcmError as e:
            return _failure(e, "DATA_ERROR")

        return {"success": True, "data": {"dataset": data.name, "rows": rows}}

    def landscape(self, config: RunConfig, grid_size: int = 2001, output: Optional[str] = None) -> dict:
        """Single-cluster cost over a grid for 1-D data, with eta_hat from FCM(m_ini)."""
        try:
            data = self.load_data(config)
            fcm = fcm_run(data, config.m_ini, q=config.q, seed=config.seed)
            eta_hat = apcm_init(data, config.m_ini, config.effective_alpha, fcm).eta_hat
            grid = default_grid(data, grid_size)
            values = cost_landscape_1d(data, eta_hat, config.effective_alpha, grid)
            minima = find_local_minima(values)
            if output:
                write_landscape_csv(grid, values, output)
        except OSError as e:
            return _failure(e, "IO_ERROR")
        except ApcmError as e:
            return _failure(e, "DATA_ERROR")

        return {
            "success": True,
            "data": {"eta_hat": eta_hat, "minima": [float(grid[i]) for i in minima]},
        }

    def generate(self, name: str, seed: int, output: str) -> dict:
        try:
            data = generate(name, seed=seed)
            write_csv(data, output)
        except OSError as e:
            return _failure(e, "IO_ERROR")
        except ApcmError as e:
            return _failure(e, "DATA_ERROR")
        return {"success": True, "data": {"dataset": data.name, "points": data.n_points, "path": str(output)}}
