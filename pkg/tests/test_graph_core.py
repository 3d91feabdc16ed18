import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from egoimpute.graph_core import (
    AdjacencyMatrix,
    EgoView,
    ProbabilityMatrix,
    extract_ego_view,
    front_permutation,
    partition,
)

from .conftest import random_graph


def test_partition_identity():
    b = partition(np.eye(4), 2)
    np.testing.assert_array_equal(b.m11, np.eye(2))
    np.testing.assert_array_equal(b.m12, np.zeros((2, 2)))
    np.testing.assert_array_equal(b.m22, np.eye(2))


def test_partition_last_node(rng):
    m = rng.random((5, 5))
    b = partition(m, 4)
    assert b.m22.shape == (1, 1)
    assert b.m22[0, 0] == m[4, 4]


def test_partition_reassembles_bitwise(rng):
    m = rng.random((6, 6))
    m = m + m.T
    b = partition(m, 3)
    np.testing.assert_array_equal(b.m21, b.m12.T)
    assert np.array_equal(b.reassemble(), m)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8).flatmap(
    lambda n: st.tuples(arrays(np.float64, (n, n), elements=st.floats(-1e6, 1e6)), st.integers(1, n - 1))))
def test_partition_reassemble_property(args):
    m, n = args
    assert np.array_equal(partition(m, n).reassemble(), m)


@pytest.mark.parametrize("n", [0, 4, -1])
def test_partition_rejects_bad_n(n):
    with pytest.raises(ValueError):
        partition(np.eye(4), n)


def test_ego_view_path_graph():
    a = AdjacencyMatrix(np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    v = extract_ego_view(a, [1])
    np.testing.assert_array_equal(v.a11, [[0]])
    np.testing.assert_array_equal(v.a12, [[1, 1]])
    assert v.hidden == (0, 2)


def test_ego_view_all_but_last(rng):
    a = AdjacencyMatrix(random_graph(7, 0.4, 3))
    v = extract_ego_view(a, range(6))
    np.testing.assert_array_equal(v.a12[:, 0], a.values[:6, 6])


def test_ego_view_permuted_observed():
    a = random_graph(6, 0.5, 11)
    obs = [4, 0, 5]
    v = extract_ego_view(AdjacencyMatrix(a), obs)
    for i, oi in enumerate(obs):
        for j, oj in enumerate(obs):
            assert v.a11[i, j] == a[oi, oj]
    hidden = [1, 2, 3]
    for i, oi in enumerate(obs):
        for k, hk in enumerate(hidden):
            assert v.a12[i, k] == a[oi, hk]


def test_ego_view_blocks_match_fronted_matrix():
    a = random_graph(9, 0.4, 5)
    obs = [7, 2, 4, 0]
    v = extract_ego_view(AdjacencyMatrix(a), obs)
    perm = front_permutation(9, obs)
    b = partition(a[np.ix_(perm, perm)], len(obs))
    np.testing.assert_array_equal(v.a11, b.m11)
    np.testing.assert_array_equal(v.a12, b.m12)


@pytest.mark.parametrize("obs", [[0, 0, 1], [0, 9], [], list(range(5))])
def test_ego_view_rejects_bad_indices(obs):
    a = AdjacencyMatrix(random_graph(5, 0.5, 1))
    with pytest.raises(ValueError):
        extract_ego_view(a, obs)


def test_adjacency_invariants():
    with pytest.raises(ValueError):
        AdjacencyMatrix(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        AdjacencyMatrix(np.array([[1, 0], [0, 0]]))
    with pytest.raises(ValueError):
        AdjacencyMatrix(np.array([[0, 0.5], [0.5, 0]]))


def test_probability_invariants():
    with pytest.raises(ValueError):
        ProbabilityMatrix(np.array([[0.0, 1.5], [1.5, 0.0]]))
    with pytest.raises(ValueError):
        ProbabilityMatrix(np.array([[0.0, 0.2], [0.3, 0.0]]))
    p = ProbabilityMatrix(np.full((3, 3), 0.25))
    assert p.max_prob == 0.25
    assert p.expected_degree() == pytest.approx(0.5)


def test_containers_are_read_only():
    p = ProbabilityMatrix(np.full((3, 3), 0.25))
    with pytest.raises(ValueError):
        p.values[0, 0] = 1.0


def test_ego_view_from_blocks_accepts_real_values():
    v = EgoView.from_blocks(np.full((2, 2), 0.5), np.full((2, 3), 0.5))
    assert v.n_total == 5 and v.hidden == (2, 3, 4)
    with pytest.raises(ValueError):
        EgoView.from_blocks(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros((2, 1)))
