"""Brute-force references for small instances.

Nothing here uses the solver's aggregates; objectives come straight from
the dense adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLarge
from .graph import SparseSymGraph

MAX_LABELINGS = 10**7


@dataclass
class OracleResult:
    best_labels: np.ndarray
    best_objective: float
    enumerated_count: int


def dense_objective(adjacency: np.ndarray, labels, c: int) -> float:
    a = np.asarray(adjacency, dtype=np.float64)
    y = np.zeros((a.shape[0], c))
    y[np.arange(a.shape[0]), labels] = 1.0
    within = np.einsum("ik,ij,jk->k", y, a, y)
    volume = y.T @ a.sum(axis=1)
    nz = volume > 0
    return float(np.sum(within[nz] / volume[nz]))


def canonical_labelings(n: int, c: int) -> np.ndarray:
    """All labelings of ``n`` nodes using exactly ``c`` clusters, one per
    set partition: ids appear in order 0, 1, 2, ... (restricted growth)."""
    out = []
    labels = [0] * n

    def rec(i, used):
        if n - i < c - used:
            return
        if i == n:
            if used == c:
                out.append(labels.copy())
            return
        for k in range(min(used + 1, c)):
            labels[i] = k
            rec(i + 1, max(used, k + 1))

    if n >= 1:
        labels[0] = 0
        rec(1, 1)
    return np.asarray(out, dtype=np.int64).reshape(-1, n)


def exhaustive_best(graph: SparseSymGraph, c: int) -> OracleResult:
    """Global maximum of the objective over every partition into ``c``
    nonempty clusters. Ties keep the lexicographically smallest labeling."""
    n = graph.n
    if c < 1 or c > n:
        raise InstanceTooLarge(f"c={c} impossible for n={n}")
    if float(c) ** n > MAX_LABELINGS:
        raise InstanceTooLarge(f"{c}^{n} labelings exceed the {MAX_LABELINGS:.0e} guard")
    a = graph.to_dense()
    deg = a.sum(axis=1)
    cands = canonical_labelings(n, c)
    best_val = -np.inf
    best_row = None
    for start in range(0, cands.shape[0], 4096):
        chunk = cands[start:start + 4096]
        y = np.zeros((chunk.shape[0], n, c))
        np.put_along_axis(y, chunk[:, :, None], 1.0, axis=2)
        within = np.einsum("bik,ij,bjk->bk", y, a, y)
        volume = np.einsum("bik,i->bk", y, deg)
        vals = np.where(volume > 0, within / np.where(volume > 0, volume, 1.0), 0.0).sum(axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_row = chunk[k].copy()
    return OracleResult(best_row, dense_objective(a, best_row, c), int(cands.shape[0]))


def check_coordinatewise_optimal(graph: SparseSymGraph, labels, tol: float = 1e-12):
    """Whether no single-node relabeling improves the objective by more than ``tol``.

    Nodes alone in their cluster are not moved. Returns ``(ok, violation)``
    where ``violation`` is the first improving ``(m, k)`` or ``None``.
    """
    labels = np.asarray(labels, dtype=np.int64)
    a = graph.to_dense()
    c = int(labels.max()) + 1
    base = dense_objective(a, labels, c)
    sizes = np.bincount(labels, minlength=c)
    for m in range(graph.n):
        p = labels[m]
        if sizes[p] <= 1:
            continue
        for k in range(c):
            if k == p:
                continue
            trial = labels.copy()
            trial[m] = k
            if dense_objective(a, trial, c) > base + tol:
                return False, (m, k)
    return True, None
