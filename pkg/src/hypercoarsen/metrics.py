"""Evaluation metrics and small-instance oracles.

The brute-force routines enumerate vertex subsets as bitmasks and are meant for
tiny inputs only; ``dense_spectrum`` uses cyclic Jacobi rotations.
"""
from __future__ import annotations

import csv
import math
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .hypergraph import Hypergraph, conductance, cut, volume

BRUTE_FORCE_MAX_N = 20
DENSE_MAX_N = 2000


# --------------------------------------------------------------------------- conductance metrics


def local_conductance_report(h: Hypergraph, clusters: Iterable[Sequence[int]], delta: float | None = None) -> dict:
    """Per-cluster ``cut(S) / vol(S)`` and their mean.

    With the seed taken to be the cluster itself the locality penalty vanishes, so
    ``delta`` is only recorded.  Zero-volume clusters are excluded from the mean and
    counted under ``"excluded"``.
    """
    values: list[float | None] = []
    for c in clusters:
        vol = volume(h, c)
        values.append(cut(h, c) / vol if vol > 0 else None)
    kept = [x for x in values if x is not None]
    if not values:
        raise ValueError("no clusters")
    return {
        "phi_avg": math.fsum(kept) / len(kept) if kept else math.nan,
        "per_cluster": values,
        "excluded": len(values) - len(kept),
        "delta": delta,
    }


def average_local_conductance(h: Hypergraph, assignment, delta: float | None = None) -> float:
    clusters = assignment.clusters if hasattr(assignment, "clusters") else assignment
    return local_conductance_report(h, clusters, delta)["phi_avg"]


def write_cluster_csv(path, clusters: Sequence[Sequence[int]], values: Sequence[float | None]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cluster", "size", "hlc"])
        for i, (c, x) in enumerate(zip(clusters, values)):
            w.writerow([i, len(c), "" if x is None else repr(float(x))])


def kway_conductance(h: Hypergraph, parts) -> float:
    """Largest conductance over the parts of a k-way partition."""
    labels = np.asarray(parts.parts if hasattr(parts, "parts") else parts)
    ids = np.unique(labels)
    if len(ids) < 2:
        raise ValueError("k-way conductance needs at least two parts")
    return max(conductance(h, np.flatnonzero(labels == q).tolist()) for q in ids)


# --------------------------------------------------------------------------- cut preservation


def spectral_bisector(k: int = 25, iters: int = 10, seed: int = 0) -> Callable[[Hypergraph], np.ndarray]:
    """Two-way split by vertex-weighted median along the principal embedding direction."""
    from .embed import smooth_embed
    from .hypergraph import star_expand
    from .partition import recursive_bisection

    def bisect(h: Hypergraph) -> np.ndarray:
        emb = smooth_embed(star_expand(h), k, iters, seed)
        return recursive_bisection(emb.vertex_coords, 2, h.vertex_weights)

    return bisect


def file_bisector(path) -> Callable[[Hypergraph], np.ndarray]:
    """Bisector reading a precomputed two-way part file for the hypergraph it is given."""
    from .partition import load_partition_file

    def bisect(h: Hypergraph) -> np.ndarray:
        return load_partition_file(path, h.n).parts

    return bisect


def cut_preservation(h: Hypergraph, result, bisector: Callable[[Hypergraph], np.ndarray] | None = None):
    """Cut of bisecting ``h`` directly vs. bisecting the coarse graph and projecting back.

    Returns ``(cut_before, cut_after, relative_diff)``.
    """
    bisector = bisector or spectral_bisector()
    before_labels = np.asarray(bisector(h))
    coarse_labels = np.asarray(bisector(result.coarse))
    after_labels = coarse_labels[np.asarray(result.vertex_map)]
    sides = []
    for labels in (before_labels, after_labels):
        side = np.flatnonzero(labels == labels.min())
        if len(side) == 0 or len(side) == h.n:
            raise ValueError("degenerate bisection: one side is empty")
        sides.append(side.tolist())
    before = cut(h, sides[0])
    after = cut(h, sides[1])
    if before == 0:
        rel = 0.0 if after == 0 else math.inf
    else:
        rel = abs(after - before) / before
    return before, after, rel


# --------------------------------------------------------------------------- brute-force oracles


def _subset_masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _bit_volumes(masks: np.ndarray, weights: Sequence[float]) -> np.ndarray:
    out = np.zeros(len(masks))
    for i, w in enumerate(weights):
        out += ((masks >> i) & 1) * w
    return out


def _hyperedge_cuts(masks: np.ndarray, h: Hypergraph, local: dict[int, int] | None = None) -> np.ndarray:
    """Cut weight for every subset mask; vertices missing from ``local`` are never in S."""
    out = np.zeros(len(masks))
    for p, w in zip(h.pins, h.weight_list):
        bits = 0
        outside = False
        for v in p:
            b = v if local is None else local.get(v)
            if b is None:
                outside = True
            else:
                bits |= 1 << b
        if bits == 0:
            continue
        inter = masks & bits
        split = inter != 0
        if not outside:
            split &= inter != bits
        out += split * w
    return out


def _mask_to_set(mask: int, order: Sequence[int]) -> frozenset:
    return frozenset(v for i, v in enumerate(order) if (mask >> i) & 1)


def brute_force_min_hlc(h: Hypergraph, r: Iterable[int], delta: float):
    """Exhaustive ``argmin_S HLC_R(S)`` over subsets with positive denominator.

    Returns ``(S*, value)``; ties resolve to the smallest bitmask.  When no subset is
    admissible (e.g. ``vol(R) = 0``) the result is ``(frozenset(), inf)``.
    """
    if h.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    R = frozenset(r)
    if not R:
        raise ValueError("empty seed set")
    masks = _subset_masks(h.n)
    in_r = [h.deg_list[v] if v in R else 0.0 for v in range(h.n)]
    out_r = [0.0 if v in R else h.deg_list[v] for v in range(h.n)]
    den = _bit_volumes(masks, in_r) - delta * _bit_volumes(masks, out_r)
    cuts = _hyperedge_cuts(masks, h)
    vals = np.full(len(masks), np.inf)
    ok = den > 0
    vals[ok] = cuts[ok] / den[ok]
    best = int(np.argmin(vals))
    return _mask_to_set(best, range(h.n)), float(vals[best])


def brute_force_st_cut(h: Hypergraph, vertices: Sequence[int], r: Iterable[int], delta: float, scale: int = 1):
    """Exhaustive minimum of ``cut(S) + vol(R - S) + delta * vol(S - R)`` over ``S`` within ``vertices``.

    Vertices outside ``vertices`` are fixed outside ``S``.  With integral
    ``scale * weight`` values the computation is exact integer arithmetic; returns
    ``(value, argmin set)``.
    """
    verts = sorted(vertices)
    if len(verts) > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_N} vertices")
    R = frozenset(r)
    local = {v: i for i, v in enumerate(verts)}

    def as_int(x: float) -> int:
        y = x * scale
        iy = round(y)
        if abs(y - iy) > 1e-9 * max(1.0, abs(y)):
            raise ValueError("weights are not integral after scaling")
        return int(iy)

    d_scaled = {v: as_int(h.deg_list[v]) for v in verts}
    dd_scaled = {v: as_int(delta * h.deg_list[v]) for v in verts}
    w_scaled = [as_int(w) for w in h.weight_list]
    best_val = None
    best_mask = 0
    for mask in range(1 << len(verts)):
        val = 0
        for e, p in enumerate(h.pins):
            has_in = has_out = False
            for v in p:
                i = local.get(v)
                if i is not None and (mask >> i) & 1:
                    has_in = True
                else:
                    has_out = True
            if has_in and has_out:
                val += w_scaled[e]
        for v, i in local.items():
            inside = (mask >> i) & 1
            if v in R and not inside:
                val += d_scaled[v]
            elif v not in R and inside:
                val += dd_scaled[v]
        if best_val is None or val < best_val:
            best_val, best_mask = val, mask
    return best_val, _mask_to_set(best_mask, verts)


def brute_force_graph_conductance(a) -> float:
    """``min over S with vol(S) <= vol(V)/2 of w(S, V-S) / vol(S)`` for a small simple graph."""
    A = a.toarray() if sp.issparse(a) else np.asarray(a, dtype=np.float64)
    n = A.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    deg = A.sum(axis=1)
    masks = _subset_masks(n)[1:]
    X = ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)
    vol = X @ deg
    cutw = np.einsum("si,ij,sj->s", X, A, 1.0 - X)
    ok = (vol > 0) & (vol <= deg.sum() / 2 + 1e-12)
    if not np.any(ok):
        raise ValueError("no admissible subset")
    return float(np.min(cutw[ok] / vol[ok]))


# --------------------------------------------------------------------------- dense spectrum


def jacobi_eigh(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors (columns).
    """
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T, atol=1e-12):
        raise ValueError("matrix must be square and symmetric")
    V = np.eye(n)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def normalized_laplacian(a) -> np.ndarray:
    A = a.toarray() if sp.issparse(a) else np.asarray(a, dtype=np.float64)
    deg = A.sum(axis=1)
    if np.any(deg <= 0):
        raise ValueError("normalized Laplacian needs every node to have positive degree")
    dinv = 1.0 / np.sqrt(deg)
    return np.eye(A.shape[0]) - dinv[:, None] * A * dinv[None, :]


def dense_spectrum(a, count: int = 2):
    """Smallest ``count`` eigenpairs of the normalized Laplacian ``I - D^-1/2 A D^-1/2``."""
    n = a.shape[0]
    if n > DENSE_MAX_N:
        raise ValueError(f"dense spectrum limited to {DENSE_MAX_N} nodes")
    w, V = jacobi_eigh(normalized_laplacian(a))
    return w[:count], V[:, :count]
