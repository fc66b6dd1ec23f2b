"""Seeded synthetic datasets: Gaussian mixtures with optional uniform noise."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
import yaml

try:
    from .core import DataSet, bounding_box
    from .errors import ContractViolation
except ImportError:
    from core import DataSet, bounding_box
    from errors import ContractViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComponentSpec:
    """One Gaussian component; ``covariance`` holds the diagonal variances."""

    mean: tuple[float, ...]
    covariance: tuple[float, ...]
    count: int

    def __post_init__(self):
        mean = tuple(float(v) for v in np.atleast_1d(self.mean))
        covariance = np.atleast_1d(np.asarray(self.covariance, dtype=np.float64))
        if covariance.size == 1:
            covariance = np.full(len(mean), covariance[0])
        if covariance.size != len(mean):
            raise ContractViolation(f"Component covariance has {covariance.size} entries for a {len(mean)}-d mean")
        if np.any(covariance < 0):
            raise ContractViolation("Component variances must be non-negative")
        if self.count < 0:
            raise ContractViolation(f"Component count must be non-negative, got {self.count}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", tuple(float(v) for v in covariance))

    @property
    def dim(self) -> int:
        return len(self.mean)


@dataclass(frozen=True)
class SyntheticSpec:
    """Gaussian components followed by ``noise_count`` uniform points.

    Without ``noise_box`` the noise fills the bounding box of the Gaussian samples.
    """

    components: tuple[ComponentSpec, ...]
    noise_count: int = 0
    noise_box: Optional[tuple[tuple[float, ...], tuple[float, ...]]] = None
    seed: int = 42
    name: str = "synthetic"

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise ContractViolation("SyntheticSpec needs at least one component")
        dims = {c.dim for c in components}
        if len(dims) != 1:
            raise ContractViolation(f"Components disagree on dimension: {sorted(dims)}")
        if self.noise_count < 0:
            raise ContractViolation(f"noise_count must be non-negative, got {self.noise_count}")
        if self.noise_box is not None:
            low, high = (tuple(float(v) for v in corner) for corner in self.noise_box)
            if len(low) != components[0].dim or len(high) != components[0].dim:
                raise ContractViolation("noise_box corners must match the component dimension")
            if any(lo > hi for lo, hi in zip(low, high)):
                raise ContractViolation("noise_box min corner exceeds max corner")
            object.__setattr__(self, "noise_box", (low, high))
        object.__setattr__(self, "components", components)

    @property
    def dim(self) -> int:
        return self.components[0].dim


def gen_gaussian_mixture(spec: SyntheticSpec) -> DataSet:
    """Sample the components in order, then the noise; noise gets the last class.

    Components with count 0 get no class, so classes stay contiguous from 1.
    """
    rng = np.random.default_rng(spec.seed)
    blocks, labels, means = [], [], []
    for component in spec.components:
        if component.count == 0:
            continue
        scale = np.sqrt(np.asarray(component.covariance))
        blocks.append(rng.normal(loc=component.mean, scale=scale, size=(component.count, component.dim)))
        means.append(component.mean)
        labels.append(np.full(component.count, len(means), dtype=np.int64))

    if spec.noise_count > 0:
        if spec.noise_box is not None:
            low, high = (np.asarray(corner) for corner in spec.noise_box)
        elif blocks:
            low, high = bounding_box(np.vstack(blocks))
        else:
            raise ContractViolation("Noise without components needs an explicit noise_box")
        blocks.append(rng.uniform(low, high, size=(spec.noise_count, spec.dim)))
        labels.append(np.full(spec.noise_count, len(means) + 1, dtype=np.int64))

    if not blocks:
        raise ContractViolation(f"Spec '{spec.name}' generates no points")
    logger.debug("Generated '%s': %d components, %d noise points, seed %d",
                 spec.name, len(means), spec.noise_count, spec.seed)
    return DataSet(
        points=np.vstack(blocks),
        truth=np.concatenate(labels),
        name=spec.name,
        centers=np.asarray(means) if means else None,
    )


class PresetRegistry:
    """Load dataset presets from YAML files and build SyntheticSpecs from them."""

    TOP_LEVEL_KEYS = {"name", "description", "components", "noise"}
    GROUP_FIELDS = {
        "components": {"mean", "covariance", "count"},
        "noise": {"count", "box_min", "box_max"},
    }

    def __init__(self, preset_source: Optional[Path] = None):
        self.preset_source = preset_source or self._default_preset_dir()
        self._presets: Optional[dict[str, dict[str, Any]]] = None

    def list_presets(self) -> dict[str, dict[str, Any]]:
        if self._presets is None:
            self._presets = self._load_presets()
        return self._presets

    def get_preset(self, name: str) -> dict[str, Any]:
        presets = self.list_presets()
        if name not in presets:
            available = ", ".join(sorted(presets.keys()))
            raise ValueError(f"Unknown dataset: {name}. Available: [{available}]")
        return presets[name]

    def build_spec(self, name: str, seed: int = 42) -> SyntheticSpec:
        preset = self.get_preset(name)
        components = tuple(
            ComponentSpec(mean=tuple(c["mean"]), covariance=c["covariance"], count=int(c["count"]))
            for c in preset["components"]
        )
        noise = preset.get("noise") or {}
        box = None
        if "box_min" in noise or "box_max" in noise:
            box = (tuple(noise["box_min"]), tuple(noise["box_max"]))
        return SyntheticSpec(
            components=components,
            noise_count=int(noise.get("count", 0)),
            noise_box=box,
            seed=seed,
            name=name,
        )

    def generate(self, name: str, seed: int = 42) -> DataSet:
        return gen_gaussian_mixture(self.build_spec(name, seed))

    def _default_preset_dir(self) -> Path:
        return Path(__file__).resolve().parent.parent / "presets"

    def _load_presets(self) -> dict[str, dict[str, Any]]:
        source = self.preset_source
        if not source.exists():
            raise FileNotFoundError(f"Preset source not found: {source}")

        if source.is_file():
            return {source.stem: self._load_preset_file(source)}

        preset_files = sorted(
            path for path in source.iterdir()
            if path.is_file() and path.suffix.lower() in {".yaml", ".yml"}
        )
        if not preset_files:
            raise ValueError(f"No preset YAML files found in: {source}")

        presets: dict[str, dict[str, Any]] = {}
        for preset_file in preset_files:
            preset_name = preset_file.stem
            if preset_name in presets:
                raise ValueError(f"Duplicate preset name '{preset_name}' from file: {preset_file}")
            presets[preset_name] = self._load_preset_file(preset_file)

        return presets

    def _load_preset_file(self, preset_file: Path) -> dict[str, Any]:
        with open(preset_file, "r", encoding="utf-8") as f:
            raw_config = yaml.safe_load(f) or {}

        if not isinstance(raw_config, dict) or not raw_config:
            raise ValueError(f"Preset file must define a non-empty mapping: {preset_file}")

        return self._validate_preset(preset_file.stem, raw_config)

    def _validate_preset(self, preset_name: str, raw_config: dict[str, Any]) -> dict[str, Any]:
        unknown = sorted(set(raw_config) - self.TOP_LEVEL_KEYS)
        if unknown:
            raise ValueError(f"Preset '{preset_name}' contains unknown keys: {', '.join(unknown)}")

        components = raw_config.get("components")
        if not isinstance(components, list) or not components:
            raise ValueError(f"Preset '{preset_name}' must list at least one component")
        for index, component in enumerate(components, start=1):
            self._check_group(preset_name, f"components[{index}]", component, "components")
            missing = sorted(self.GROUP_FIELDS["components"] - set(component))
            if missing:
                raise ValueError(f"Preset '{preset_name}' component {index} is missing: {', '.join(missing)}")

        noise = raw_config.get("noise")
        if noise is not None:
            self._check_group(preset_name, "noise", noise, "noise")

        return raw_config

    def _check_group(self, preset_name: str, where: str, value: Any, group: str) -> None:
        if not isinstance(value, dict):
            raise ValueError(f"Preset '{preset_name}' group '{where}' must be a mapping")
        unknown_fields = sorted(set(value.keys()) - self.GROUP_FIELDS[group])
        if unknown_fields:
            raise ValueError(
                f"Preset '{preset_name}' group '{where}' contains unknown fields: {', '.join(unknown_fields)}"
            )


_REGISTRY = PresetRegistry()

# The two clusters of the 17-point example, in row order.
_UNEQUAL_PAIR_DENSE = [
    (1.5, 3.5), (2.0, 3.5), (1.0, 3.0), (1.5, 3.0), (2.0, 3.0), (2.5, 3.0),
    (1.0, 2.5), (1.5, 2.5), (2.0, 2.5), (2.5, 2.5), (1.5, 2.0), (2.0, 2.0),
]
_UNEQUAL_PAIR_SPARSE = [(4.25, 3.5), (3.5, 2.75), (4.25, 2.75), (5.0, 2.75), (4.25, 2.0)]


def get_preset_registry() -> PresetRegistry:
    return _REGISTRY


def get_available_datasets() -> list[str]:
    return ["unequal_pair", *sorted(get_preset_registry().list_presets())]


def generate(name: str, seed: int = 42) -> DataSet:
    """Any named dataset; ``unequal_pair`` is fixed and ignores ``seed``."""
    if name == "unequal_pair":
        return gen_unequal_pair()
    return get_preset_registry().generate(name, seed)


def gen_unequal_pair() -> DataSet:
    """The fixed 17-point set: 12 points around (1.75, 2.75) and 5 around (4.25, 2.75)."""
    points = np.array(_UNEQUAL_PAIR_DENSE + _UNEQUAL_PAIR_SPARSE)
    truth = np.array([1] * len(_UNEQUAL_PAIR_DENSE) + [2] * len(_UNEQUAL_PAIR_SPARSE))
    return DataSet(points=points, truth=truth, name="unequal_pair", centers=np.array([[1.75, 2.75], [4.25, 2.75]]))


def gen_close_triplet(seed: int = 42) -> DataSet:
    return get_preset_registry().generate("close_triplet", seed)


def gen_noisy_triplet(seed: int = 42) -> DataSet:
    return get_preset_registry().generate("noisy_triplet", seed)


def gen_bimodal_1d(seed: int = 42) -> DataSet:
    return get_preset_registry().generate("bimodal_1d", seed)


def gen_single_gaussian(seed: int = 42, n: int = 1000) -> DataSet:
    """Isotropic N(0, I_2); ``n`` overrides the preset's point count."""
    spec = get_preset_registry().build_spec("single_gaussian", seed)
    component = spec.components[0]
    resized = ComponentSpec(mean=component.mean, covariance=component.covariance, count=n)
    return gen_gaussian_mixture(SyntheticSpec(components=(resized,), seed=seed, name=spec.name))
