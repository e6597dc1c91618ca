"""Compiled inner loops.

The arithmetic here must stay operation-for-operation identical to the
reference path in :mod:`fastncut.solver` (``score_candidates`` /
``apply_move``); the test-suite checks both produce the same trajectory.
"""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def sweep_kernel(row_ptr, col_idx, weights, degrees, labels, s, v, sizes, buf):
    """One ascending pass over all rows. Returns ``(moves, objective_gain)``.

    ``buf`` is a zeroed scratch vector of length ``c`` and is left zeroed.
    """
    n = labels.shape[0]
    c = s.shape[0]
    moves = 0
    gain = 0.0
    for m in range(n):
        p = labels[m]
        if sizes[p] == 1:
            continue
        lo = row_ptr[m]
        hi = row_ptr[m + 1]
        for q in range(lo, hi):
            buf[labels[col_idx[q]]] += weights[q]
        d = degrees[m]
        bp = buf[p]
        lp = s[p] / v[p] - (s[p] - 2.0 * bp) / (v[p] - d)
        best = p
        best_score = lp
        for k in range(c):
            if k == p:
                continue
            if v[k] > 0.0:
                lk = (s[k] + 2.0 * buf[k]) / (v[k] + d) - s[k] / v[k]
            else:
                lk = (s[k] + 2.0 * buf[k]) / (v[k] + d)
            if lk > best_score:
                best = k
                best_score = lk
        if best != p:
            s[best] = s[best] + 2.0 * buf[best]
            v[best] = v[best] + d
            s[p] = s[p] - 2.0 * bp
            v[p] = v[p] - d
            sizes[best] += 1
            sizes[p] -= 1
            labels[m] = best
            moves += 1
            gain += best_score - lp
        for q in range(lo, hi):
            buf[labels[col_idx[q]]] = 0.0
    return moves, gain


@numba.njit(cache=True, nogil=True)
def scan_affinity(row_ptr, col_idx, weights, labels, m, c):
    b = np.zeros(c)
    for q in range(row_ptr[m], row_ptr[m + 1]):
        b[labels[col_idx[q]]] += weights[q]
    return b
