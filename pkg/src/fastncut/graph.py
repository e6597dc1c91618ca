"""Sparse symmetric similarity graphs in CSR form."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse as sp

from .errors import InputError, InvalidIndex, IsolatedNode

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparseSymGraph:
    """Symmetric, zero-diagonal, positively weighted adjacency.

    Every stored weight is strictly positive, each row is sorted by column,
    and entry ``(i, j)`` is stored iff ``(j, i)`` is, with a bitwise-equal
    weight. ``degrees[i]`` is the row sum and is positive for every node.
    """

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    weights: np.ndarray
    degrees: np.ndarray
    dropped_diagonal: int = field(default=0, compare=False)

    @property
    def nnz(self) -> int:
        """Number of stored (directed) entries, i.e. twice the edge count."""
        return int(self.col_idx.shape[0])

    @property
    def n_edges(self) -> int:
        return self.nnz // 2

    @property
    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return self.nnz / (self.n * (self.n - 1))

    @property
    def volume(self) -> float:
        return float(self.degrees.sum())

    def neighbors(self, i: int) -> Iterator[tuple[int, float]]:
        return neighbors(self, i)

    def weight(self, i: int, j: int) -> float:
        """Stored weight of ``(i, j)``, or 0.0 when absent."""
        lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
        row = self.col_idx[lo:hi]
        k = np.searchsorted(row, j)
        if k < row.shape[0] and row[k] == j:
            return float(self.weights[lo + k])
        return 0.0

    def to_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.weights.copy(), self.col_idx.copy(), self.row_ptr.copy()),
            shape=(self.n, self.n),
        )

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()

    def scaled(self, factor: float) -> "SparseSymGraph":
        """Copy with every weight multiplied by a positive ``factor``."""
        if not factor > 0:
            raise InputError("scale factor must be positive")
        w = self.weights * factor
        return _assemble(self.n, self.row_ptr.copy(), self.col_idx.copy(), w)

    def __repr__(self) -> str:
        return f"SparseSymGraph(n={self.n}, edges={self.n_edges})"


def neighbors(graph: SparseSymGraph, i: int) -> Iterator[tuple[int, float]]:
    """Yield the stored ``(j, w)`` entries of row ``i`` in ascending ``j``."""
    if not 0 <= i < graph.n:
        raise InvalidIndex(f"node {i} out of range [0, {graph.n})")
    lo, hi = graph.row_ptr[i], graph.row_ptr[i + 1]
    for k in range(lo, hi):
        yield int(graph.col_idx[k]), float(graph.weights[k])


def from_edges(n: int, edges: Iterable[tuple[int, int, float]]) -> SparseSymGraph:
    """Build a graph from undirected weighted edges.

    Each ``(i, j, w)`` contributes ``w`` to both ``(i, j)`` and ``(j, i)``.
    Repeated pairs are summed in input order, self-loops are dropped (and
    counted in ``dropped_diagonal``), and pairs whose total weight is zero
    are not stored.

    Raises
    ------
    InvalidIndex
        If an endpoint is outside ``[0, n)``.
    IsolatedNode
        If some node ends up with no incident edge.
    """
    edges = list(edges)
    if edges:
        arr = np.asarray(edges, dtype=np.float64).reshape(-1, 3)
        i = arr[:, 0]
        j = arr[:, 1]
        w = arr[:, 2].copy()
    else:
        i = j = w = np.zeros(0)
    return from_arrays(n, i, j, w)


def from_arrays(n: int, i, j, w) -> SparseSymGraph:
    """Vectorized :func:`from_edges` taking parallel endpoint/weight arrays."""
    n = int(n)
    if n < 1:
        raise InputError("graph needs at least one node")
    i = np.asarray(i)
    j = np.asarray(j)
    w = np.asarray(w, dtype=np.float64)
    if not (i.shape == j.shape == w.shape):
        raise InputError("edge arrays must have equal length")
    if i.size:
        if not (np.all(np.mod(i, 1) == 0) and np.all(np.mod(j, 1) == 0)):
            raise InvalidIndex("node indices must be integers")
        i = i.astype(np.int64)
        j = j.astype(np.int64)
        bad = (i < 0) | (i >= n) | (j < 0) | (j >= n)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise InvalidIndex(f"edge ({i[k]}, {j[k]}) out of range for n={n}")
        if not np.all(np.isfinite(w)) or (w < 0).any():
            raise InputError("edge weights must be finite and nonnegative")
    else:
        i = j = np.zeros(0, dtype=np.int64)

    diag = i == j
    dropped = int(diag.sum())
    if dropped:
        log.warning("dropped %d self-loop entries", dropped)
        keep = ~diag
        i, j, w = i[keep], j[keep], w[keep]

    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    order = np.lexsort((hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    if lo.size:
        starts = np.flatnonzero(
            np.concatenate(([True], (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])))
        )
        lo, hi = lo[starts], hi[starts]
        w = np.add.reduceat(w, starts)
        pos = w > 0
        lo, hi, w = lo[pos], hi[pos], w[pos]

    rows = np.concatenate((lo, hi))
    cols = np.concatenate((hi, lo))
    vals = np.concatenate((w, w))
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=row_ptr[1:])
    return _assemble(n, row_ptr, cols.astype(np.int64), vals, dropped)


def from_dense(matrix) -> SparseSymGraph:
    """Build from a symmetric dense array; the diagonal is ignored."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("adjacency must be square")
    if not np.array_equal(a, a.T):
        raise InputError("adjacency must be symmetric")
    i, j = np.nonzero(np.triu(a, 1))
    return from_arrays(a.shape[0], i, j, a[i, j])


def _assemble(n, row_ptr, col_idx, weights, dropped=0) -> SparseSymGraph:
    counts = np.diff(row_ptr)
    if (counts == 0).any():
        raise IsolatedNode(int(np.flatnonzero(counts == 0)[0]))
    degrees = np.add.reduceat(weights, row_ptr[:-1])
    for arr in (row_ptr, col_idx, weights, degrees):
        arr.setflags(write=False)
    return SparseSymGraph(n, row_ptr, col_idx, weights, degrees, dropped)


def check_symmetric(graph: SparseSymGraph) -> bool:
    """True when every stored ``(i, j, w)`` has a mirror ``(j, i, w)``."""
    csr = graph.to_csr()
    diff = csr - csr.T
    return diff.count_nonzero() == 0 and csr.diagonal().sum() == 0
