"""Run configuration for the apcm command line."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Optional, Union

import yaml

ALGORITHMS = ("fcm", "pcm", "apcm")
DEFAULT_SEED = 42


class UsageError(ValueError):
    """Invalid or contradictory run parameters (exit code 2)."""


@dataclass
class RunConfig:
    """Parameters of one clustering run.

    ``alpha`` applies to apcm only and ``K`` to pcm only; leaving them unset
    selects the defaults (alpha=1, K=1). ``max_iter`` defaults to 100 for fcm
    and 300 otherwise.
    """

    algorithm: str = "apcm"
    m_ini: int = 3
    alpha: Optional[float] = None
    K: Optional[float] = None
    q: float = 2.0
    tol: float = 1e-6
    max_iter: Optional[int] = None
    seed: int = DEFAULT_SEED
    input: Optional[str] = None
    gen: Optional[str] = None
    label_col: Optional[Union[str, int]] = None
    has_header: bool = False
    output: Optional[str] = None
    labels_out: Optional[str] = None
    audit: bool = False

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        if not isinstance(raw, dict):
            raise UsageError(f"Config file must define a mapping: {path}")
        return cls.from_mapping(raw, source=str(path))

    @classmethod
    def from_mapping(cls, raw: dict[str, Any], source: str = "config") -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise UsageError(f"{source} contains unknown keys: {', '.join(unknown)}")
        return cls(**raw)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Copy with every override that is not None applied."""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})

    @property
    def effective_alpha(self) -> Optional[float]:
        if self.algorithm != "apcm":
            return None
        return 1.0 if self.alpha is None else float(self.alpha)

    @property
    def effective_K(self) -> Optional[float]:
        if self.algorithm != "pcm":
            return None
        return 1.0 if self.K is None else float(self.K)

    @property
    def effective_max_iter(self) -> int:
        if self.max_iter is not None:
            return int(self.max_iter)
        return 100 if self.algorithm == "fcm" else 300

    @property
    def label_column(self) -> Optional[Union[str, int]]:
        """``label_col`` with digit strings read as column indices."""
        if isinstance(self.label_col, str) and self.label_col.lstrip("-").isdigit():
            return int(self.label_col)
        return self.label_col

    def validate(self, require_data: bool = True) -> "RunConfig":
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"Unknown algorithm: {self.algorithm}. Available: [{', '.join(ALGORITHMS)}]")
        if self.alpha is not None and self.algorithm != "apcm":
            raise UsageError(f"alpha applies only to apcm, not {self.algorithm}")
        if self.K is not None and self.algorithm != "pcm":
            raise UsageError(f"K applies only to pcm, not {self.algorithm}")
        if self.m_ini < 1:
            raise UsageError(f"m_ini must be at least 1, got {self.m_ini}")
        if self.alpha is not None and self.alpha <= 0:
            raise UsageError(f"alpha must be positive, got {self.alpha}")
        if self.K is not None and self.K <= 0:
            raise UsageError(f"K must be positive, got {self.K}")
        if self.q <= 1:
            raise UsageError(f"q must exceed 1, got {self.q}")
        if self.tol <= 0:
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.max_iter is not None and self.max_iter < 1:
            raise UsageError(f"max_iter must be at least 1, got {self.max_iter}")
        if require_data and (self.input is None) == (self.gen is None):
            raise UsageError("Exactly one of input or gen must be given")
        if self.label_col is not None and self.input is None:
            raise UsageError("label_col applies only to CSV input")
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
