"""External clustering scores: accuracy, NMI and adjusted Rand index."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LengthMismatch


@dataclass
class Contingency:
    table: np.ndarray  # pred clusters x true clusters
    rows: np.ndarray
    cols: np.ndarray
    n: int


def contingency(pred, truth) -> Contingency:
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.size} predicted labels vs {truth.size} true labels")
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    p = p.ravel()
    t = t.ravel()
    r = int(p.max()) + 1 if p.size else 0
    s = int(t.max()) + 1 if t.size else 0
    table = np.zeros((r, s), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return Contingency(table, table.sum(axis=1), table.sum(axis=0), int(pred.size))


def accuracy(pred, truth) -> float:
    """Fraction of samples correctly labeled under the best one-to-one
    matching of predicted to true clusters."""
    ct = contingency(pred, truth)
    if ct.n == 0:
        return 1.0
    r, c = linear_sum_assignment(ct.table, maximize=True)
    return float(ct.table[r, c].sum()) / ct.n


# Sums use math.fsum so the result does not depend on cluster numbering.

def _entropy(counts, n) -> float:
    return math.fsum(int(c) / n * math.log(n / int(c)) for c in counts if c > 0)


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of the entropies.

    Two single-cluster partitions score 1; if only one side has zero
    entropy the score is 0.
    """
    ct = contingency(pred, truth)
    n = ct.n
    hu = _entropy(ct.rows, n)
    hv = _entropy(ct.cols, n)
    if hu == 0.0 or hv == 0.0:
        return 1.0 if hu == hv else 0.0
    i, j = np.nonzero(ct.table)
    mi = math.fsum(
        nij / n * math.log((n * nij) / (int(ct.rows[a]) * int(ct.cols[b])))
        for a, b, nij in zip(i.tolist(), j.tolist(), ct.table[i, j].tolist()))
    return min(1.0, max(0.0, mi / math.sqrt(hu * hv)))


def _pairs(x) -> int:
    return sum(int(v) * (int(v) - 1) // 2 for v in x)


def ari(pred, truth) -> float:
    """Hubert-Arabie adjusted Rand index, evaluated in exact integer arithmetic
    up to the final division."""
    ct = contingency(pred, truth)
    total = ct.n * (ct.n - 1) // 2
    index = _pairs(ct.table.ravel())
    a = _pairs(ct.rows)
    b = _pairs(ct.cols)
    num = 2 * (index * total - a * b)
    den = (a + b) * total - 2 * a * b
    if den == 0:
        return 1.0
    return num / den


def evaluate(pred, truth) -> dict:
    return {"acc": accuracy(pred, truth), "nmi": nmi(pred, truth), "ari": ari(pred, truth)}
