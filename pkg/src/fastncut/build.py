"""Self-tuning k-NN affinity graphs from feature vectors."""

from __future__ import annotations

import csv
import os

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError, KTooLarge, ParseError, ZeroSigma
from .graph import SparseSymGraph, from_arrays

K_GRAPH = 10
K_SIGMA = 7

_BLOCK_ROWS = 1024


def read_features(path: str | os.PathLike, skip_header: bool = False) -> np.ndarray:
    """Read a CSV of numeric features, one sample per row."""
    path = os.fspath(path)
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if skip_header and lineno == 1:
                continue
            if not record or all(not cell.strip() for cell in record):
                continue
            try:
                values = [float(cell) for cell in record]
            except ValueError:
                raise ParseError(f"non-numeric value in {record!r}", line=lineno, path=path) from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(f"expected {width} columns, got {len(values)}",
                                 line=lineno, path=path)
            if not all(np.isfinite(values)):
                raise ParseError("features must be finite", line=lineno, path=path)
            rows.append(values)
    if len(rows) < 2:
        raise ParseError("need at least two samples", path=path)
    return np.asarray(rows, dtype=np.float64)


def write_features(features, path: str | os.PathLike) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(features, dtype=np.float64):
            writer.writerow([repr(float(x)) for x in row])


def _check_features(features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 2:
        raise InputError("features must be an n x d array with n >= 2")
    if not np.all(np.isfinite(x)):
        raise InputError("features must be finite")
    return x


def knn_index(features, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors by Euclidean distance.

    Returns ``(indices, distances)``, both ``n x k`` and sorted ascending by
    distance per row. The sample itself is excluded; equal distances are
    ordered by lower neighbor index.
    """
    x = _check_features(features)
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise KTooLarge(f"k={k} must lie in [1, {n - 1}] for {n} samples")
    idx = np.empty((n, k), dtype=np.int64)
    dist = np.empty((n, k), dtype=np.float64)
    for start in range(0, n, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, n)
        d = cdist(x[start:stop], x)
        rows = np.arange(stop - start)
        d[rows, rows + start] = np.inf
        # stable sort keeps lower column indices first among ties
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        idx[start:stop] = order
        dist[start:stop] = np.take_along_axis(d, order, axis=1)
    return idx, dist


def self_tuning_affinity(features, k_graph: int = K_GRAPH,
                         k_sigma: int = K_SIGMA) -> SparseSymGraph:
    """Gaussian k-NN graph with per-sample bandwidths.

    ``w_ij = exp(-d_ij**2 / (sigma_i * sigma_j))`` for ``j`` among the
    ``k_graph`` nearest neighbors of ``i``, where ``sigma_i`` is the distance
    to the ``k_sigma``-th neighbor. The directed k-NN weights are averaged
    with their transpose, a missing direction counting as zero.
    """
    x = _check_features(features)
    n = x.shape[0]
    if not 1 <= k_sigma <= n - 1:
        raise KTooLarge(f"k_sigma={k_sigma} must lie in [1, {n - 1}]")
    if not 1 <= k_graph <= n - 1:
        raise KTooLarge(f"k_graph={k_graph} must lie in [1, {n - 1}]")
    idx, dist = knn_index(x, max(k_graph, k_sigma))
    sigma = dist[:, k_sigma - 1]
    zero = np.flatnonzero(sigma <= 0)
    if zero.size:
        raise ZeroSigma(int(zero[0]))

    src = np.repeat(np.arange(n), k_graph)
    dst = idx[:, :k_graph].ravel()
    d = dist[:, :k_graph].ravel()
    w = np.exp(-(d * d) / (sigma[src] * sigma[dst]))
    # each directed entry contributes half to the undirected pair; mutual
    # neighbors thus recover w, one-sided ones get w / 2
    return from_arrays(n, src, dst, 0.5 * w)
