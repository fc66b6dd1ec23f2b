#!/usr/bin/env python3
"""
Tests for the seeded dataset generators and the YAML preset registry.

Usage:
    pytest test_datagen.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "skills/apcm/libs"))

import numpy as np
import pytest

from datagen import (
    ComponentSpec,
    PresetRegistry,
    SyntheticSpec,
    gen_bimodal_1d,
    gen_close_triplet,
    gen_gaussian_mixture,
    gen_noisy_triplet,
    gen_single_gaussian,
    gen_unequal_pair,
    generate,
    get_available_datasets,
)
from errors import ContractViolation


def test_available_datasets():
    names = get_available_datasets()
    assert names[0] == "unequal_pair"
    for name in ("close_triplet", "noisy_triplet", "bimodal_1d", "single_gaussian"):
        assert name in names, f"Preset {name} not registered"


def test_unequal_pair_is_fixed():
    data = gen_unequal_pair()
    assert data.points.shape == (17, 2)
    assert np.bincount(data.truth).tolist() == [0, 12, 5]
    assert np.allclose(data.points[data.truth == 1].mean(axis=0), [1.75, 2.75])
    assert np.allclose(data.points[data.truth == 2].mean(axis=0), [4.25, 2.75])
    assert np.array_equal(generate("unequal_pair", seed=5).points, data.points), "unequal_pair ignores the seed"


def test_close_triplet_shape_and_seeding():
    data = gen_close_triplet(seed=1)
    assert data.points.shape == (1100, 2)
    assert np.bincount(data.truth).tolist() == [0, 500, 300, 300]
    assert np.allclose(data.centers, [[1.35, 0.23], [4.03, 4.09], [5.64, 2.28]])
    assert np.array_equal(gen_close_triplet(seed=1).points, data.points), "Same seed must give the same points"
    assert not np.array_equal(gen_close_triplet(seed=2).points, data.points)


def test_noisy_triplet_noise_is_last_class():
    data = gen_noisy_triplet(seed=3)
    assert data.n_points == 2300
    assert np.bincount(data.truth).tolist() == [0, 1000, 1000, 100, 200]
    assert data.centers.shape == (3, 2), "Noise has no generator mean"

    gaussian = data.points[data.truth < 4]
    noise = data.points[data.truth == 4]
    assert np.all(noise >= gaussian.min(axis=0)) and np.all(noise <= gaussian.max(axis=0))


def test_bimodal_1d_is_one_dimensional():
    data = gen_bimodal_1d(seed=0)
    assert data.points.shape == (100, 1)
    assert np.bincount(data.truth).tolist() == [0, 50, 50]


def test_single_gaussian_size_override():
    assert gen_single_gaussian(seed=0).n_points == 1000
    data = gen_single_gaussian(seed=0, n=250)
    assert data.n_points == 250 and data.dim == 2
    assert data.n_classes == 1


def test_zero_count_component_is_skipped():
    spec = SyntheticSpec(components=(
        ComponentSpec(mean=(0.0,), covariance=1.0, count=10),
        ComponentSpec(mean=(5.0,), covariance=1.0, count=0),
        ComponentSpec(mean=(9.0,), covariance=1.0, count=5),
    ), seed=0)
    data = gen_gaussian_mixture(spec)
    assert data.truth.max() == 2, "Classes must stay contiguous"
    assert np.allclose(data.centers.ravel(), [0.0, 9.0])


def test_explicit_noise_box():
    spec = SyntheticSpec(
        components=(ComponentSpec(mean=(0.0, 0.0), covariance=(1.0, 4.0), count=20),),
        noise_count=30,
        noise_box=((-1.0, 10.0), (1.0, 12.0)),
        seed=4,
    )
    data = gen_gaussian_mixture(spec)
    noise = data.points[data.truth == 2]
    assert noise.shape == (30, 2)
    assert np.all((noise[:, 0] >= -1.0) & (noise[:, 0] <= 1.0))
    assert np.all((noise[:, 1] >= 10.0) & (noise[:, 1] <= 12.0))


def test_spec_validation():
    with pytest.raises(ContractViolation):
        ComponentSpec(mean=(0.0, 0.0), covariance=(1.0, 1.0, 1.0), count=3)
    with pytest.raises(ContractViolation):
        ComponentSpec(mean=(0.0,), covariance=-1.0, count=3)
    with pytest.raises(ContractViolation):
        SyntheticSpec(components=(
            ComponentSpec(mean=(0.0,), covariance=1.0, count=3),
            ComponentSpec(mean=(0.0, 0.0), covariance=1.0, count=3),
        ))
    with pytest.raises(ContractViolation):
        gen_gaussian_mixture(SyntheticSpec(
            components=(ComponentSpec(mean=(0.0,), covariance=1.0, count=0),), noise_count=5,
        ))


def test_registry_unknown_preset():
    with pytest.raises(ValueError, match="Unknown dataset"):
        generate("triplet9")


def test_registry_custom_directory(tmp_path):
    (tmp_path / "line.yaml").write_text(
        "name: Line\ncomponents:\n  - mean: [0.0]\n    covariance: 1.0\n    count: 7\n",
        encoding="utf-8",
    )
    registry = PresetRegistry(tmp_path)
    assert "line" in registry.list_presets()
    data = registry.generate("line", seed=3)
    assert data.points.shape == (7, 1) and data.name == "line"


def test_registry_rejects_bad_presets(tmp_path):
    (tmp_path / "bad.yaml").write_text(
        "components:\n  - mean: [0.0]\n    covariance: 1.0\n    count: 7\n    weight: 2\n",
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="unknown fields"):
        PresetRegistry(tmp_path).list_presets()

    (tmp_path / "bad.yaml").write_text("components:\n  - mean: [0.0]\n    count: 7\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing"):
        PresetRegistry(tmp_path).list_presets()

    (tmp_path / "bad.yaml").write_text("components: []\nseed: 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="unknown keys"):
        PresetRegistry(tmp_path).list_presets()


def test_registry_duplicate_names(tmp_path):
    text = "components:\n  - mean: [0.0]\n    covariance: 1.0\n    count: 2\n"
    (tmp_path / "twin.yaml").write_text(text, encoding="utf-8")
    (tmp_path / "twin.yml").write_text(text, encoding="utf-8")
    with pytest.raises(ValueError, match="Duplicate"):
        PresetRegistry(tmp_path).list_presets()
