import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fastncut.errors import AllZeroRow, TargetTooLarge
from fastncut.graph import from_dense, from_edges
from fastncut.n2hi import (
    build_hierarchy,
    coarsen,
    first_appearance,
    first_neighbor_partition,
    first_neighbors,
    initialize,
    refine,
)
from fastncut.solver import Labeling
from fastncut.synthetic import block_graph, random_graph


def test_first_neighbors_g4(g4):
    assert first_neighbors(g4).tolist() == [1, 0, 3, 2]
    part = first_neighbor_partition(g4)
    assert part.labels.tolist() == [0, 0, 1, 1] and part.c == 2


def test_chain_closure():
    g = from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)])
    assert first_neighbors(g).tolist() == [1, 2, 1]
    assert first_neighbor_partition(g).labels.tolist() == [0, 0, 0]


def test_two_nodes_one_group():
    assert first_neighbor_partition(from_edges(2, [(0, 1, 0.3)])).c == 1


def test_ties_go_to_lowest_index():
    a = np.ones((4, 4)) - np.eye(4)
    assert first_neighbors(sp.csr_matrix(a)).tolist() == [1, 0, 0, 0]


def test_all_zero_row():
    a = sp.csr_matrix(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float))
    with pytest.raises(AllZeroRow) as exc:
        first_neighbor_partition(a)
    assert exc.value.node == 2
    assert first_neighbor_partition(a, stall=True).labels.tolist() == [0, 0, 0]


def test_first_appearance():
    assert first_appearance([5, 5, 2, 7, 2]).tolist() == [0, 0, 1, 2, 1]


def test_coarsen_g4(g4):
    c = coarsen(g4, Labeling(np.array([0, 0, 1, 1]), 2))
    assert c.toarray().tolist() == [[0.0, 0.025], [0.025, 0.0]]


def test_coarsen_singletons_copy_weights(g4):
    c = coarsen(g4, Labeling(np.arange(4), 4))
    assert np.array_equal(c.toarray(), g4.to_dense())


def test_coarsen_no_cross_edges():
    a = sp.csr_matrix(np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], float))
    assert coarsen(a, Labeling(np.array([0, 0, 1, 1]), 2)).nnz == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 14), st.integers(2, 5))
def test_coarsen_matches_definition(seed, n, k):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
    a = np.triu(a, 1)
    a = a + a.T
    labels = np.concatenate((np.arange(min(k, n)), rng.integers(0, min(k, n), n - min(k, n))))
    part = Labeling(labels, min(k, n))
    got, intra = coarsen(sp.csr_matrix(a), part, return_intra=True)
    got = got.toarray()
    assert np.array_equal(got, got.T)
    for p in range(part.c):
        for q in range(part.c):
            block = a[np.ix_(labels == p, labels == q)]
            ref = block.sum() / block.size
            if p == q:
                assert got[p, q] == 0.0
                assert intra[p] == pytest.approx(ref, abs=1e-12)
            else:
                assert got[p, q] == pytest.approx(ref, abs=1e-12)


def test_hierarchy_g4(g4):
    h = build_hierarchy(g4)
    assert h.sizes == [2, 1]
    assert h.layers[0].partition.labels.tolist() == [0, 0, 1, 1]


def test_hierarchy_seven_three_one():
    # three tight groups, first-neighbor links stay inside each group
    edges = [(0, 1, 1.0), (1, 2, 0.9), (3, 4, 1.0), (4, 5, 0.8), (5, 6, 0.95),
             (2, 3, 0.1), (6, 0, 0.05), (2, 5, 0.07)]
    h = build_hierarchy(from_edges(7, edges))
    assert [7] + h.sizes[:1] == [7, 3] or h.sizes[0] == 3
    assert h.sizes[0] == 3 and h.sizes[-1] == 1


def test_complete_graph_collapses_quickly():
    h = build_hierarchy(from_dense(np.ones((6, 6)) - np.eye(6)))
    assert len(h.layers) <= 2 and h.sizes[-1] == 1


def test_disconnected_graph_terminates():
    g = from_edges(6, [(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0)])
    h = build_hierarchy(g)
    assert h.sizes == [3, 1]
    assert h.layers[1].stalled == 3


def test_refine_example():
    # groups A, B, C as singleton nodes of a 3-node layer
    a = sp.csr_matrix(np.array([[0, 0.9, 0.1], [0.9, 0, 0.5], [0.1, 0.5, 0]]))
    out = refine(a, Labeling(np.arange(3), 3), 2)
    assert out.labels.tolist() == [0, 0, 1]


def test_refine_uses_unweighted_average():
    # after A+B merge, sim to C is 0.3 and to D is 0.35, so AB joins D next
    a = np.zeros((4, 4))
    for (i, j, w) in [(0, 1, 0.9), (0, 2, 0.1), (1, 2, 0.5), (0, 3, 0.2), (1, 3, 0.5), (2, 3, 0.01)]:
        a[i, j] = a[j, i] = w
    out = refine(sp.csr_matrix(a), Labeling(np.arange(4), 4), 2)
    assert out.labels.tolist() == [0, 0, 1, 0]


def test_refine_identity_and_zero_sims():
    a = sp.csr_matrix((4, 4))
    assert refine(a, Labeling(np.arange(4), 4), 4).labels.tolist() == [0, 1, 2, 3]
    assert refine(a, Labeling(np.arange(4), 4), 2).labels.tolist() == [0, 0, 0, 1]
    with pytest.raises(TargetTooLarge):
        refine(a, Labeling(np.arange(4), 4), 5)


def test_initialize_g4(g4):
    assert initialize(g4, 2).labels.tolist() == [0, 0, 1, 1]
    assert initialize(g4, 1).labels.tolist() == [0, 0, 0, 0]
    with pytest.raises(TargetTooLarge) as exc:
        initialize(g4, 4)
    assert exc.value.available == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_initialize_exact_count_and_determinism(seed):
    g, _ = block_graph(4, 15, intra_density=0.5, noise_density=0.1, seed=seed)
    h = build_hierarchy(g)
    assert all(b < a for a, b in zip(h.sizes, h.sizes[1:]))
    assert h.sizes[-1] == 1
    for c in range(1, h.sizes[0] + 1):
        lab = initialize(g, c, h)
        assert lab.c == c and np.bincount(lab.labels, minlength=c).min() >= 1
        assert np.array_equal(lab.labels, initialize(g, c).labels)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(6, 30))
def test_layer_structure(seed, n):
    g = random_graph(n, 0.3, seed=seed)
    h = build_hierarchy(g)
    base = g.to_csr()
    for level, layer in enumerate(h.layers):
        if layer.stalled == 0:
            assert layer.partition.sizes.min() >= 2
        # each stored graph is the averaged cross similarity of the graph it partitioned
        a = h.graph_before(level, base).toarray()
        labels = layer.partition.labels
        y = np.eye(layer.size)[labels]
        cnt = y.sum(axis=0)
        ref = (y.T @ a @ y) / np.outer(cnt, cnt)
        np.fill_diagonal(ref, 0.0)
        np.testing.assert_allclose(layer.graph.toarray(), ref, rtol=0, atol=1e-12)
    # the first level is also the average over base nodes
    labels = h.base_labels(0)
    y = np.eye(h.sizes[0])[labels]
    cnt = y.sum(axis=0)
    ref = (y.T @ base.toarray() @ y) / np.outer(cnt, cnt)
    np.fill_diagonal(ref, 0.0)
    np.testing.assert_allclose(h.layers[0].graph.toarray(), ref, rtol=0, atol=1e-12)
