"""Choosing the number of clusters from the objective curve.

The objective is solved for an ascending list of cluster counts. It rises
steeply while true clusters are still being merged and flattens once every
true cluster has its own label, so the chosen count is the one whose
incoming gain is largest relative to the gain that follows it.
"""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, TooFewCandidates
from .n2hi import build_hierarchy, initialize
from .solver import ClusterResult, SolverConfig, ncut_objective, solve

log = logging.getLogger(__name__)

GAP_EPS = 1e-12


@dataclass
class GapProfile:
    candidates: list
    objectives: list
    results: list = field(default_factory=list, repr=False)

    @property
    def gaps(self) -> list:
        j = self.objectives
        return [j[i] - j[i - 1] for i in range(1, len(j))]


def profile(graph, candidates: Sequence[int], config: Optional[SolverConfig] = None,
            workers: int = 1) -> GapProfile:
    """Initialize and solve once per candidate count.

    Raises
    ------
    TargetTooLarge
        If a candidate exceeds what the initializer can produce.
    """
    cands = [int(c) for c in candidates]
    if not cands:
        raise InputError("no candidate cluster counts")
    if any(c < 2 for c in cands):
        raise InputError("candidate cluster counts must be at least 2")
    if any(b <= a for a, b in zip(cands, cands[1:])):
        raise InputError("candidate cluster counts must be strictly ascending")
    hierarchy = build_hierarchy(graph)
    inits = [initialize(graph, c, hierarchy) for c in cands]

    def run(init) -> ClusterResult:
        return solve(graph, init, config)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, inits))
    else:
        results = [run(init) for init in inits]
    objectives = [ncut_objective(graph, r.labels) for r in results]
    out = GapProfile(cands, objectives, results)
    if any(g < 0 for g in out.gaps):
        log.warning("objective decreases between some candidate counts: %s", out.gaps)
    return out


def select(profile: GapProfile) -> int:
    """Interior candidate maximizing ``gap_in / max(gap_out, eps)``.

    Ties go to the smallest candidate.
    """
    if len(profile.candidates) < 3:
        raise TooFewCandidates(
            f"need at least 3 candidate counts, got {len(profile.candidates)}")
    gaps = profile.gaps
    best, best_ratio = None, -np.inf
    for i in range(1, len(profile.candidates) - 1):
        ratio = gaps[i - 1] / max(gaps[i], GAP_EPS)
        if ratio > best_ratio:
            best, best_ratio = profile.candidates[i], ratio
    return best


def write_profile_csv(profile: GapProfile, path: str | os.PathLike) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["c", "J", "gap"])
        prev = None
        for c, j in zip(profile.candidates, profile.objectives):
            gap = "" if prev is None else f"{j - prev:.12g}"
            writer.writerow([c, f"{j:.12g}", gap])
            prev = j
