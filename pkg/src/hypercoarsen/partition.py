"""Vertex partitionings: embedding-based recursive bisection and external part files."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import Embedding
from .hypergraph import Hypergraph


@dataclass
class Partitioning:
    parts: np.ndarray

    @property
    def n_parts(self) -> int:
        return int(self.parts.max()) + 1 if self.parts.size else 0

    def members(self) -> list[np.ndarray]:
        order = np.argsort(self.parts, kind="stable")
        bounds = np.searchsorted(self.parts[order], np.arange(self.n_parts + 1))
        return [order[bounds[j]: bounds[j + 1]] for j in range(self.n_parts)]


def principal_projection(X: np.ndarray) -> np.ndarray:
    Y = X - X.mean(axis=0)
    if not np.any(Y):
        return np.zeros(len(X))
    _, _, vt = np.linalg.svd(Y, full_matrices=False)
    d = vt[0]
    if d[int(np.argmax(np.abs(d)))] < 0:
        d = -d
    return Y @ d


def _split(idx: np.ndarray, proj: np.ndarray, weights: np.ndarray, left_share: float, min_left: int, min_right: int) -> int:
    """Number of leading (projection-sorted) vertices that go left."""
    cum = np.cumsum(weights)
    total = cum[-1] if len(cum) else 0.0
    if total > 0:
        cut_at = int(np.searchsorted(cum, total * left_share - 1e-12 * total) + 1)
    else:
        cut_at = int(round(len(idx) * left_share))
    return min(max(cut_at, min_left), len(idx) - min_right)


def recursive_bisection(coords: np.ndarray, p: int, weights: np.ndarray | None = None) -> np.ndarray:
    """Split rows into ``p`` parts by repeated weighted-median cuts along the principal direction."""
    n = coords.shape[0]
    if not 1 <= p <= n:
        raise ValueError(f"part count {p} must be in [1, {n}]")
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=np.float64)
    parts = np.zeros(n, dtype=np.int64)
    next_id = 0

    def rec(idx: np.ndarray, q: int) -> None:
        nonlocal next_id
        if q == 1:
            parts[idx] = next_id
            next_id += 1
            return
        ql = q // 2
        qr = q - ql
        proj = principal_projection(coords[idx])
        order = np.lexsort((idx, proj))
        idx_sorted = idx[order]
        k = _split(idx_sorted, proj[order], w[idx_sorted], ql / q, ql, qr)
        rec(np.sort(idx_sorted[:k]), ql)
        rec(np.sort(idx_sorted[k:]), qr)

    rec(np.arange(n), p)
    return parts


def partition(h: Hypergraph, emb: Embedding, p: int) -> Partitioning:
    """Internal stand-in for an external graph partitioner: embedding-based recursive bisection."""
    if not 1 <= p <= h.n:
        raise ValueError(f"part count {p} must be in [1, {h.n}]")
    return Partitioning(recursive_bisection(emb.vertex_coords, p, h.vertex_weights))


def load_partition_file(path, n: int) -> Partitioning:
    """One 0-based part id per vertex line; ids are compacted to ``0..P-1`` in order."""
    ids = []
    with open(path, encoding="utf-8") as f:
        for lineno, ln in enumerate(f, 1):
            ln = ln.strip()
            if not ln or ln.startswith("%"):
                continue
            try:
                x = int(ln)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not an integer part id") from None
            if x < 0:
                raise ValueError(f"{path}:{lineno}: negative part id")
            ids.append(x)
    if len(ids) != n:
        raise ValueError(f"{path}: expected {n} part ids, found {len(ids)}")
    raw = np.array(ids, dtype=np.int64)
    _, compact = np.unique(raw, return_inverse=True)
    return Partitioning(compact.astype(np.int64))
