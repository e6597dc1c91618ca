"""Matrix Market coordinate I/O for :class:`SparseSymGraph`.

Only ``matrix coordinate real|integer|pattern general|symmetric`` files are
accepted. Indices in the file are 1-based.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import AsymmetricInput, InvalidIndex, ParseError
from .graph import SparseSymGraph, from_arrays

_FIELDS = {"real", "integer", "pattern"}
_SYMMETRIES = {"general", "symmetric"}


def read_matrix_market(path: str | os.PathLike) -> SparseSymGraph:
    """Load a graph, mirroring ``symmetric`` files and validating ``general`` ones.

    Raises
    ------
    ParseError
        On a malformed header, size line or entry (with the line number).
    AsymmetricInput
        If a ``general`` file stores ``(i, j)`` and ``(j, i)`` with different
        weights, or only one of them.
    """
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1, path=path)

    header = lines[0].split()
    if len(header) < 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", line=1, path=path)
    obj, fmt, field, symmetry = (h.lower() for h in header[1:5])
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError("only 'matrix coordinate' files are supported", line=1, path=path)
    if field not in _FIELDS:
        raise ParseError(f"unsupported field '{field}'", line=1, path=path)
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry '{symmetry}'", line=1, path=path)
    pattern = field == "pattern"

    lineno = 1
    size = None
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if size is None:
            try:
                size = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError(f"bad size line '{text}'", line=lineno, path=path) from None
            if len(size) != 3 or size[0] != size[1] or min(size) < 0:
                raise ParseError("size line must be 'n n nnz' for a square matrix",
                                 line=lineno, path=path)
            continue
        want = 2 if pattern else 3
        if len(parts) != want:
            raise ParseError(f"expected {want} fields, got {len(parts)}", line=lineno, path=path)
        try:
            r, c = int(parts[0]), int(parts[1])
            v = 1.0 if pattern else float(parts[2])
        except ValueError:
            raise ParseError(f"bad entry '{text}'", line=lineno, path=path) from None
        n = size[0]
        if not (1 <= r <= n and 1 <= c <= n):
            raise ParseError(f"index ({r}, {c}) outside 1..{n}", line=lineno, path=path)
        if not np.isfinite(v) or v < 0:
            raise ParseError(f"weight {v} must be finite and nonnegative", line=lineno, path=path)
        rows.append(r - 1)
        cols.append(c - 1)
        vals.append(v)

    if size is None:
        raise ParseError("missing size line", line=lineno, path=path)
    if len(vals) != size[2]:
        raise ParseError(f"expected {size[2]} entries, found {len(vals)}", line=lineno, path=path)

    n = size[0]
    i = np.asarray(rows, dtype=np.int64)
    j = np.asarray(cols, dtype=np.int64)
    w = np.asarray(vals, dtype=np.float64)
    if symmetry == "general":
        i, j, w = _fold_general(n, i, j, w)
    try:
        return from_arrays(n, i, j, w)
    except InvalidIndex as exc:  # pragma: no cover - ranges checked above
        raise ParseError(str(exc), path=path) from None


def _fold_general(n, i, j, w):
    """Check mirrored entries of a general matrix and keep one triangle."""
    off = i != j
    sums: dict[tuple[int, int], float] = {}
    for a, b, x in zip(i[off].tolist(), j[off].tolist(), w[off].tolist()):
        sums[(a, b)] = sums.get((a, b), 0.0) + x
    for (a, b), x in sums.items():
        y = sums.get((b, a))
        if y is None and x == 0.0:
            continue
        if y != x:
            raise AsymmetricInput(
                f"entry ({a + 1}, {b + 1}) = {x!r} but ({b + 1}, {a + 1}) = "
                f"{'missing' if y is None else repr(y)}"
            )
    upper = [(a, b, x) for (a, b), x in sums.items() if a < b]
    upper.sort()
    diag = [(a, a, x) for a, b, x in zip(i.tolist(), j.tolist(), w.tolist()) if a == b]
    keep = upper + diag
    if not keep:
        return (np.zeros(0, dtype=np.int64),) * 2 + (np.zeros(0),)
    arr = np.asarray(keep, dtype=np.float64)
    return arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64), arr[:, 2]


def write_matrix_market(graph: SparseSymGraph, path: str | os.PathLike,
                        comment: str | None = None) -> None:
    """Write the strict lower triangle as a ``symmetric`` coordinate file.

    Weights are printed with 17 significant digits so a read-back
    reproduces them bitwise.
    """
    rows = np.repeat(np.arange(graph.n), np.diff(graph.row_ptr))
    lower = rows > graph.col_idx
    r = rows[lower]
    c = graph.col_idx[lower]
    w = graph.weights[lower]
    order = np.lexsort((r, c))  # column-major, as the format conventionally lists
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("%%MatrixMarket matrix coordinate real symmetric\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{graph.n} {graph.n} {r.shape[0]}\n")
        for k in order:
            fh.write(f"{r[k] + 1} {c[k] + 1} {w[k]:.17g}\n")
