"""Plain-text file formats: edge lists, dense matrices and ego views."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from .graph_core import AdjacencyMatrix, EgoView


class ParseError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


def load_edge_list(path, one_based: bool = False, n_nodes: Optional[int] = None) -> AdjacencyMatrix:
    """Read an undirected, unweighted graph from an edge list.

    One edge per line as two integer node ids; further columns (weights,
    timestamps) are ignored. Lines starting with ``#`` and blank lines are
    skipped, self-loops dropped and repeated edges collapsed.
    """
    edges = []
    offset = 1 if one_based else 0
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) < 2:
                raise ParseError(path, line_no, f"expected two node ids, got {text!r}")
            try:
                i, j = int(parts[0]) - offset, int(parts[1]) - offset
            except ValueError:
                raise ParseError(path, line_no, f"node ids must be integers, got {text!r}") from None
            if i < 0 or j < 0:
                raise ParseError(path, line_no, "negative node id" + (" (ids are 1-based)" if one_based else ""))
            edges.append((i, j))
    max_id = max((max(e) for e in edges), default=-1)
    if n_nodes is None:
        n_nodes = max_id + 1
    elif max_id >= n_nodes:
        raise ValueError(f"node id {max_id} does not fit in n_nodes={n_nodes}")
    a = np.zeros((n_nodes, n_nodes))
    if edges:
        e = np.asarray(edges)
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
    np.fill_diagonal(a, 0.0)
    return AdjacencyMatrix(a)


def write_edge_list(adjacency: AdjacencyMatrix, path) -> None:
    i, j = np.nonzero(np.triu(adjacency.values, 1))
    with open(path, "w") as fh:
        for a, b in zip(i, j):
            fh.write(f"{a} {b}\n")


def write_matrix(matrix, path) -> None:
    """Header ``rows cols``, then row-major values; 0/1 matrices are written as integers."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    binary = bool(np.all((m == 0) | (m == 1)))
    with open(path, "w") as fh:
        fh.write(f"{m.shape[0]} {m.shape[1]}\n")
        for row in m:
            if binary:
                fh.write(" ".join("1" if x else "0" for x in row))
            else:
                fh.write(" ".join(repr(float(x)) for x in row))
            fh.write("\n")


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError(path, 1, "empty matrix file")
    try:
        rows, cols = (int(t) for t in lines[0].split())
    except ValueError:
        raise ParseError(path, 1, "header must be 'rows cols'") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise ParseError(path, len(lines), f"expected {rows} rows, found {len(body)}")
    out = np.empty((rows, cols))
    for r, line in enumerate(body):
        try:
            vals = [float(t) for t in line.split()]
        except ValueError:
            raise ParseError(path, r + 2, "non-numeric entry") from None
        if len(vals) != cols:
            raise ParseError(path, r + 2, f"expected {cols} values, found {len(vals)}")
        out[r] = vals
    return out


def view_to_dict(view: EgoView) -> dict:
    return {
        "n_total": view.n_total,
        "observed": list(view.observed),
        "hidden": list(map(int, view.hidden)),
        "a11": view.a11.tolist(),
        "a12": view.a12.tolist(),
    }


def write_view(view: EgoView, path) -> None:
    Path(path).write_text(json.dumps(view_to_dict(view)))


def read_view(path) -> EgoView:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    try:
        return EgoView(tuple(d["observed"]), np.asarray(d["a11"], float), np.asarray(d["a12"], float), d["n_total"])
    except KeyError as exc:
        raise ParseError(path, 1, f"missing field {exc.args[0]!r}") from None
