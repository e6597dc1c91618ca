"""Seeded synthetic data: block graphs, random graphs and noisy circles."""

from __future__ import annotations

import numpy as np

from .errors import IsolatedNode
from .graph import SparseSymGraph, from_arrays


def _rng(seed):
    return np.random.default_rng(seed)


def block_graph(n_blocks: int = 5, block_size: int = 100, *,
                intra_density: float = 1.0, intra_range=(0.5, 1.0),
                noise_density: float = 0.02, noise_range=(0.0, 0.05),
                seed=None) -> tuple[SparseSymGraph, np.ndarray]:
    """Dense diagonal blocks plus weak uniform background edges.

    Each within-block pair is linked with probability ``intra_density`` and
    weight ``U(intra_range)``; every pair of nodes additionally receives a
    ``U(noise_range)`` edge with probability ``noise_density``.
    Returns ``(graph, truth)``.
    """
    rng = _rng(seed)
    n = n_blocks * block_size
    truth = np.repeat(np.arange(n_blocks), block_size)
    iu, ju = np.triu_indices(n, k=1)
    same = truth[iu] == truth[ju]
    bi, bj = iu[same], ju[same]
    keep = rng.random(bi.size) < intra_density
    bi, bj = bi[keep], bj[keep]
    bw = rng.uniform(*intra_range, size=bi.size)
    noisy = rng.random(iu.size) < noise_density
    ni, nj = iu[noisy], ju[noisy]
    nw = rng.uniform(*noise_range, size=ni.size)
    graph = from_arrays(n, np.concatenate((bi, ni)), np.concatenate((bj, nj)),
                        np.concatenate((bw, nw)))
    return graph, truth


def sparse_block_graph(n: int, n_blocks: int = 10, degree: int = 10, *,
                       p_out: float = 0.05, seed=None) -> tuple[SparseSymGraph, np.ndarray]:
    """Block graph with roughly ``degree`` edges per node.

    Every node draws ``degree // 2`` partners, inside its own block with
    probability ``1 - p_out`` and uniformly elsewhere otherwise, so the
    average degree is about ``degree`` and ``|E|`` grows linearly with ``n``.
    """
    rng = _rng(seed)
    truth = np.arange(n) * n_blocks // n
    starts = np.searchsorted(truth, np.arange(n_blocks))
    ends = np.append(starts[1:], n)
    half = max(1, degree // 2)
    src = np.repeat(np.arange(n), half)
    blk = truth[src]
    lo, hi = starts[blk], ends[blk]
    inside = lo + (rng.random(src.size) * (hi - lo)).astype(np.int64)
    anywhere = rng.integers(0, n, size=src.size)
    dst = np.where(rng.random(src.size) < p_out, anywhere, inside)
    w = rng.uniform(0.5, 1.0, size=src.size)
    loop = src == dst
    graph = from_arrays(n, src[~loop], dst[~loop], w[~loop])
    return graph, truth


def random_graph(n: int, density: float = 0.4, *, seed=None,
                 max_tries: int = 1000) -> SparseSymGraph:
    """Erdos-Renyi graph with ``U(0, 1]`` weights, redrawn until no node
    is isolated."""
    rng = _rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        keep = rng.random(iu.size) < density
        w = 1.0 - rng.random(int(keep.sum()))
        try:
            return from_arrays(n, iu[keep], ju[keep], w)
        except IsolatedNode:
            continue
    raise RuntimeError(f"no graph without isolated nodes after {max_tries} draws")


def two_circles(n_per_circle: int = 200, n_noise: int = 50, *, radii=(1.0, 2.0),
                jitter: float = 0.0, extent: float = 2.5, seed=None):
    """Two concentric circles plus uniform noise in ``[-extent, extent]^2``.

    Returns ``(features, truth)``; circle points come first (labels 0 and 1)
    and noise points are labeled 2.
    """
    rng = _rng(seed)
    pts = []
    for r in radii:
        theta = np.linspace(0.0, 2.0 * np.pi, n_per_circle, endpoint=False)
        rr = r + jitter * rng.standard_normal(n_per_circle)
        pts.append(np.column_stack((rr * np.cos(theta), rr * np.sin(theta))))
    pts.append(rng.uniform(-extent, extent, size=(n_noise, 2)))
    truth = np.concatenate((np.zeros(n_per_circle, dtype=np.int64),
                            np.ones(n_per_circle, dtype=np.int64),
                            np.full(n_noise, 2, dtype=np.int64)))
    return np.vstack(pts), truth
