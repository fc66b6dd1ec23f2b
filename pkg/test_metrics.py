#!/usr/bin/env python3
"""
Tests for the external validation measures.

Usage:
    pytest test_metrics.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "skills/apcm/libs"))

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core import DataSet
from errors import ContractViolation, UndefinedMeasureError
from metrics import TruthCenters, mean_center_distance, rand_measure, success_rate, truth_centers_for


def test_rand_measure_identical_and_permuted():
    truth = [1, 1, 2, 2, 3]
    assert rand_measure(truth, truth) == 100.0
    assert rand_measure([3, 3, 1, 1, 2], truth) == 100.0, "Cluster numbering must not matter"


def test_rand_measure_counts_pairs():
    # agreeing pairs: (1,2), (1,4), (2,4); the other three disagree
    assert rand_measure([1, 1, 1, 2], [1, 1, 2, 2]) == pytest.approx(50.0)


def test_rand_measure_needs_two_points():
    with pytest.raises(UndefinedMeasureError):
        rand_measure([1], [1])
    with pytest.raises(ContractViolation):
        rand_measure([1, 2], [1, 2, 2])


def test_success_rate_maps_clusters_to_majority_class():
    truth = [1, 1, 1, 2, 2, 2]
    assert success_rate([1, 1, 2, 2, 2, 2], truth) == pytest.approx(100.0 * 5 / 6)
    assert success_rate([1, 1, 1, 1, 1, 1], truth) == pytest.approx(50.0)
    # two clusters may map to the same class
    assert success_rate([1, 2, 2, 3, 3, 3], truth) == 100.0


def test_success_rate_extra_class_counts_against():
    truth = [1, 1, 2, 2, 3]
    assert success_rate([1, 1, 2, 2, 2], truth) == pytest.approx(80.0)


@given(st.lists(st.integers(1, 4), min_size=2, max_size=40), st.integers(0, 1000))
def test_measures_are_percentages(truth, seed):
    labels = np.random.default_rng(seed).integers(1, 5, size=len(truth))
    assert 0.0 <= rand_measure(labels, truth) <= 100.0
    assert 0.0 < success_rate(labels, truth) <= 100.0


def test_mean_center_distance_both_directions():
    centers = TruthCenters(np.array([[0.0, 0.0], [10.0, 0.0]]))
    assert centers.m_true == 2

    # more representatives than classes: each centre picks its nearest representative
    theta = np.array([[1.0, 0.0], [10.0, 0.0], [5.0, 5.0]])
    assert mean_center_distance(theta, centers) == pytest.approx(0.5)

    # fewer: each representative picks its nearest centre
    assert mean_center_distance(np.array([[7.0, 0.0]]), centers) == pytest.approx(3.0)
    assert mean_center_distance(np.array([[7.0, 0.0]]), centers.centers) == pytest.approx(3.0)


def test_truth_centers_prefers_generator_means():
    data = DataSet(points=[[0.0], [2.0], [10.0]], truth=[1, 1, 2], centers=[[0.5], [9.0]])
    assert truth_centers_for(data).centers.ravel().tolist() == [0.5, 9.0]

    data = DataSet(points=[[0.0], [2.0], [10.0]], truth=[1, 1, 2])
    assert truth_centers_for(data).centers.ravel().tolist() == [1.0, 10.0]

    assert truth_centers_for(DataSet(points=[[0.0], [1.0]])) is None
