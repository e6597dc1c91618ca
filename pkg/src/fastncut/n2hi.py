"""Nearest Neighbor Hierarchical Initialization.

Nodes are merged with their most similar neighbor, the graph is coarsened
by averaging similarities between the resulting groups, and the process is
repeated until a single group remains. A level with exactly ``c`` groups
is returned directly; otherwise the tightest level with more than ``c``
groups is merged down greedily. Everything is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import AllZeroRow, InputError, TargetTooLarge
from .graph import SparseSymGraph
from .solver import Labeling


def _as_csr(layer) -> sp.csr_matrix:
    if isinstance(layer, SparseSymGraph):
        return layer.to_csr()
    a = sp.csr_matrix(layer, dtype=np.float64)
    a.eliminate_zeros()
    a.sort_indices()
    return a


def first_appearance(labels) -> np.ndarray:
    """Relabel so cluster ids follow the order of their lowest member."""
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.ravel()]


def first_neighbors(layer) -> np.ndarray:
    """Most similar neighbor of every node, ``-1`` for an all-zero row.

    Ties go to the lowest neighbor index; the diagonal is never chosen.
    """
    a = _as_csr(layer).copy()
    a.setdiag(0)
    a.eliminate_zeros()
    a.sort_indices()
    n = a.shape[0]
    nn = np.full(n, -1, dtype=np.int64)
    counts = np.diff(a.indptr)
    nonempty = np.flatnonzero(counts)
    if nonempty.size == 0:
        return nn
    rowmax = np.maximum.reduceat(a.data, a.indptr[nonempty])
    rows = np.repeat(np.arange(n), counts)
    full = np.full(n, np.nan)
    full[nonempty] = rowmax
    hit = np.flatnonzero(a.data == full[rows])
    # columns are sorted, so the first hit per row has the lowest index
    hit_rows, first = np.unique(rows[hit], return_index=True)
    nn[hit_rows] = a.indices[hit[first]]
    return nn


def first_neighbor_partition(layer, *, stall: bool = False) -> Labeling:
    """Group nodes linked by the first-neighbor relation.

    ``i`` and ``j`` share a group when one is the other's most similar
    neighbor; groups are the connected components of that relation, numbered
    by their lowest member.

    With ``stall=True`` a node whose row is entirely zero is attached to the
    lowest-indexed other group instead of raising :class:`AllZeroRow`.
    """
    a = _as_csr(layer)
    n = a.shape[0]
    if n < 2:
        raise InputError("first-neighbor partition needs at least two nodes")
    nn = first_neighbors(a)
    src = np.arange(n)
    orphans = np.flatnonzero(nn < 0)
    if orphans.size:
        if not stall:
            raise AllZeroRow(int(orphans[0]))
        nn = nn.copy()
        nn[orphans] = np.where(orphans == 0, 1, 0)
    link = sp.csr_matrix((np.ones(n), (src, nn)), shape=(n, n))
    k, comp = connected_components(link, directed=True, connection="weak")
    return Labeling(first_appearance(comp), k)


def _indicator(partition: Labeling) -> sp.csr_matrix:
    n = partition.n
    return sp.csr_matrix((np.ones(n), (np.arange(n), partition.labels)),
                         shape=(n, partition.c))


def coarsen(layer, partition: Labeling, *, return_intra: bool = False):
    """Similarity graph between groups: average pairwise cross similarity.

    Entry ``(k, l)`` is the summed similarity between members of ``k`` and
    ``l`` divided by ``|k| * |l|``. The diagonal (average intra-group
    similarity) is not stored; pass ``return_intra=True`` to get it as a
    separate vector. The result is exactly symmetric.
    """
    a = _as_csr(layer)
    if partition.n != a.shape[0]:
        raise InputError("partition size does not match the layer graph")
    y = _indicator(partition)
    sizes = partition.sizes.astype(np.float64)
    m = (y.T @ a @ y).tocsr()
    intra = m.diagonal() / (sizes * sizes)
    upper = sp.triu(m, k=1).tocoo()
    upper.data = upper.data / (sizes[upper.row] * sizes[upper.col])
    out = (upper + upper.T).tocsr()
    out.eliminate_zeros()
    out.sort_indices()
    if return_intra:
        return out, intra
    return out


@dataclass
class Layer:
    """One level: a partition of the previous level's nodes and the graph
    between its groups."""

    partition: Labeling
    graph: sp.csr_matrix
    intra: np.ndarray
    stalled: int = 0

    @property
    def size(self) -> int:
        return self.partition.c


@dataclass
class ClusterHierarchy:
    base_n: int
    layers: list = field(default_factory=list)

    @property
    def sizes(self) -> list:
        return [layer.size for layer in self.layers]

    def graph_before(self, level: int, base: sp.csr_matrix) -> sp.csr_matrix:
        """The graph partitioned at ``level`` (the base graph for level 0)."""
        return base if level == 0 else self.layers[level - 1].graph

    def base_labels(self, level: int) -> np.ndarray:
        """Labels of the base nodes after composing levels ``0 .. level``."""
        labels = self.layers[0].partition.labels
        for layer in self.layers[1:level + 1]:
            labels = layer.partition.labels[labels]
        return labels.copy()

    def to_dict(self) -> dict:
        return {
            "base_n": self.base_n,
            "sizes": self.sizes,
            "layers": [
                {"clusters": layer.size, "labels": layer.partition.labels.tolist()}
                for layer in self.layers
            ],
        }


def build_hierarchy(graph) -> ClusterHierarchy:
    """Alternate first-neighbor grouping and coarsening down to one group."""
    a = _as_csr(graph)
    hierarchy = ClusterHierarchy(base_n=a.shape[0])
    if a.shape[0] == 1:
        part = Labeling(np.zeros(1, dtype=np.int64), 1)
        hierarchy.layers.append(Layer(part, sp.csr_matrix((1, 1)), np.zeros(1)))
        return hierarchy
    while True:
        stalled = int(np.count_nonzero(np.diff(a.indptr) == 0))
        part = first_neighbor_partition(a, stall=True)
        coarse, intra = coarsen(a, part, return_intra=True)
        hierarchy.layers.append(Layer(part, coarse, intra, stalled))
        if part.c == 1:
            return hierarchy
        a = coarse


def refine(layer_graph, layer_partition: Labeling, c: int) -> Labeling:
    """Merge the groups of ``layer_partition`` down to exactly ``c``.

    Repeatedly merges the most similar pair ``(u, v)`` (ties: smallest
    ``u``, then smallest ``v``), keeps ``u`` and sets its similarity to every
    other group ``i`` to ``(a_iu + a_iv) / 2``.

    Returns a labeling of the groups (not of the base nodes).
    """
    k = layer_partition.c
    if c > k:
        raise TargetTooLarge(c, k)
    if c < 1:
        raise InputError("target cluster count must be at least 1")
    if c == k:
        return Labeling(np.arange(k), k)
    sim = coarsen(layer_graph, layer_partition).toarray()
    np.fill_diagonal(sim, -np.inf)
    owner = np.arange(k)
    for _ in range(k - c):
        flat = int(np.argmax(sim))
        u, v = divmod(flat, k)
        merged = (sim[:, u] + sim[:, v]) / 2.0
        sim[u, :] = merged
        sim[:, u] = merged
        sim[u, u] = -np.inf
        sim[v, :] = -np.inf
        sim[:, v] = -np.inf
        owner[owner == v] = u
    return Labeling(first_appearance(owner), c)


def initialize(graph, c: int, hierarchy: ClusterHierarchy | None = None) -> Labeling:
    """Deterministic initial labeling of the base nodes with exactly ``c`` groups.

    Raises
    ------
    TargetTooLarge
        If ``c`` exceeds the number of groups at the first level.
    """
    a = _as_csr(graph)
    if hierarchy is None:
        hierarchy = build_hierarchy(a)
    sizes = hierarchy.sizes
    if c < 1:
        raise InputError("target cluster count must be at least 1")
    if c > sizes[0]:
        raise TargetTooLarge(c, sizes[0])
    if c in sizes:
        return Labeling(hierarchy.base_labels(sizes.index(c)), c)
    level = max(i for i, size in enumerate(sizes) if size > c)
    layer_graph = hierarchy.graph_before(level, a)
    merged = refine(layer_graph, hierarchy.layers[level].partition, c)
    labels = merged.labels[hierarchy.base_labels(level)]
    return Labeling(first_appearance(labels), c)
