#!/usr/bin/env python3
"""
Tests for classical PCM: scale estimation, updates, coincident merging.

Usage:
    pytest test_pcm.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "skills/apcm/libs"))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import DataSet, load_iris_dataset
from datagen import gen_unequal_pair
from errors import ClusterCollapseError, ContractViolation
from fcm import FcmResult, fcm_run
from pcm import (
    PcmState,
    merge_coincident,
    partition_conditions,
    pcm_gamma_init,
    pcm_run,
    pcm_step,
    pcm_update_theta,
    pcm_update_u,
)


def test_gamma_init_weighted_mean_squared_distance():
    data = DataSet(points=[[0.0], [2.0], [10.0]])
    fcm = FcmResult(theta=np.array([[1.0], [10.0]]), u=np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
                    q=2.0, iterations=1)
    gamma = pcm_gamma_init(fcm, data, K=1.0)
    assert np.allclose(gamma, [1.0, 0.0])
    assert np.allclose(pcm_gamma_init(fcm, data, K=2.5), [2.5, 0.0])

    with pytest.raises(ContractViolation):
        pcm_gamma_init(fcm, data, K=0.0)
    with pytest.raises(ContractViolation):
        pcm_gamma_init(fcm, DataSet(points=[[0.0], [1.0]]), K=1.0)


def test_update_u_is_exponential_kernel():
    data = DataSet(points=[[0.0, 0.0], [1.0, 0.0], [3.0, 4.0]])
    u = pcm_update_u(data, np.array([[0.0, 0.0]]), np.array([2.0]))
    assert np.allclose(u[:, 0], np.exp(-np.array([0.0, 1.0, 25.0]) / 2.0))
    assert u[0, 0] == 1.0


def test_update_theta_weighted_mean_and_collapse():
    data = DataSet(points=[[0.0], [4.0]])
    theta = pcm_update_theta(data, np.array([[1.0, 0.0], [1.0, 1.0]]))
    assert np.allclose(theta, [[2.0], [4.0]])

    with pytest.raises(ClusterCollapseError) as info:
        pcm_update_theta(data, np.array([[1.0, 0.0], [1.0, 0.0]]))
    assert info.value.clusters == [1], "Zero-weight columns are reported 0-based"


def test_partition_conditions():
    assert partition_conditions(np.array([[0.5, 0.2], [0.1, 0.9]])) == (True, True, True)
    assert partition_conditions(np.array([[1.0, 0.2], [1.0, 0.9]]))[2] is False, "A column summing to N is degenerate"
    assert partition_conditions(np.array([[0.0, 0.0], [0.5, 0.5]]))[1] is False
    assert partition_conditions(np.array([[1.5, 0.0], [0.5, 0.5]]))[0] is False


def test_merge_coincident_groups_and_relabels():
    theta = np.array([[0.0, 0.0], [5.0, 5.0], [0.0, 1e-6], [9.0, 9.0]])
    gamma = np.array([1.0, 2.0, 3.0, 4.0])
    labels = np.array([0, 2, 1, 1, 0])
    merged = merge_coincident(theta, gamma, labels, delta=1e-3)

    assert merged.groups == [[0, 2], [1]], f"Unexpected groups {merged.groups}"
    assert merged.labels.tolist() == [0, 0, 1, 1, 0]
    assert np.allclose(merged.gamma, [2.0, 2.0])
    assert np.allclose(merged.theta[0], [0.0, 5e-7])


def test_merge_single_representative():
    merged = merge_coincident(np.array([[1.0, 2.0]]), np.array([0.5]), np.zeros(3, dtype=int), delta=0.1)
    assert merged.groups == [[0]]
    assert merged.labels.tolist() == [0, 0, 0]


def test_run_keeps_gamma_fixed():
    data = gen_unequal_pair()
    report = pcm_run(data, 2, seed=42, trace=True)
    first = report.trace[0].gamma
    assert all(np.array_equal(record.gamma, first) for record in report.trace), "gamma changed during the run"
    assert not first.flags.writeable
    assert report.algorithm == "pcm" and report.K == 1.0 and report.alpha is None


def test_run_k_scales_gamma():
    data = gen_unequal_pair()
    fcm = fcm_run(data, 2, seed=42)
    small = pcm_run(data, 2, K=1.0, fcm=fcm, trace=True)
    large = pcm_run(data, 2, K=3.0, fcm=fcm, trace=True)
    assert np.allclose(large.trace[0].gamma, 3.0 * small.trace[0].gamma)


def test_run_labels_are_one_based():
    report = pcm_run(gen_unequal_pair(), 2, seed=42)
    assert report.labels.min() == 1
    assert set(report.labels.tolist()) == set(range(1, report.m_final + 1))


def test_run_rejects_mismatched_fcm():
    data = gen_unequal_pair()
    with pytest.raises(ContractViolation):
        pcm_run(data, 3, fcm=fcm_run(data, 2))


def _inside_bounding_box(theta, points, slack=1e-9):
    return bool(np.all(theta >= points.min(axis=0) - slack) and np.all(theta <= points.max(axis=0) + slack))


def test_step_advances_theta_from_fresh_u():
    data = gen_unequal_pair()
    fcm = fcm_run(data, 2, seed=42)
    gamma = pcm_gamma_init(fcm, data)
    state = PcmState(theta=fcm.theta.copy(), u=fcm.u.copy(), gamma=gamma)
    stepped, shift = pcm_step(state, data)
    expected_u = pcm_update_u(data, fcm.theta, gamma)
    assert stepped.t == 1 and stepped.gamma is gamma
    assert np.allclose(stepped.u, expected_u)
    assert np.allclose(stepped.theta, pcm_update_theta(data, expected_u))
    assert shift == pytest.approx(np.max(np.linalg.norm(stepped.theta - fcm.theta, axis=1)))
    assert np.array_equal(state.theta, fcm.theta), "The input state is left untouched"


@pytest.mark.parametrize("dataset, m", [(load_iris_dataset(), 3), (gen_unequal_pair(), 2)], ids=["iris", "unequal_pair"])
def test_partition_conditions_hold_at_every_iteration(dataset, m):
    report = pcm_run(dataset, m, seed=42, trace=True)
    assert len(report.trace) >= 2
    for record in report.trace:
        assert all(partition_conditions(record.u)), f"Partition conditions broken at iteration {record.t}"
        assert _inside_bounding_box(record.theta, dataset.points), f"theta left the data box at iteration {record.t}"
    first = report.trace[0].gamma
    assert all(np.array_equal(record.gamma, first) for record in report.trace)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    n=st.integers(min_value=5, max_value=30),
    dim=st.integers(min_value=1, max_value=3),
    m=st.integers(min_value=1, max_value=4),
)
def test_representatives_stay_in_bounding_box(seed, n, dim, m):
    points = np.random.default_rng(seed).uniform(-10.0, 10.0, size=(n, dim))
    data = DataSet(points=points)
    fcm = fcm_run(data, m, seed=seed)
    assert _inside_bounding_box(fcm.theta, points)
    report = pcm_run(data, m, fcm=fcm, trace=True)
    for record in report.trace:
        assert _inside_bounding_box(record.theta, points)
