"""Low-pass spectral embedding of the star expansion and per-hyperedge seed clustering."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import _backend
from .hypergraph import BipartiteGraph, Hypergraph
from .rng import stream


@dataclass(frozen=True)
class Embedding:
    """Smoothed random test vectors, one row per graph node.

    For a star expansion the first ``n_vertices`` rows are the hypergraph vertices
    and the remaining rows are star (hyperedge) nodes.  ``scales`` holds each
    column's 2-norm before the final normalisation.
    """

    coords: np.ndarray
    k: int
    smoothing_iters: int
    seed: int
    n_vertices: int
    scales: np.ndarray = field(repr=False)

    @property
    def vertex_coords(self) -> np.ndarray:
        return self.coords[: self.n_vertices]


def _as_csr(g) -> sp.csr_matrix:
    if isinstance(g, BipartiteGraph):
        return g.adjacency()
    a = sp.csr_matrix(g, dtype=np.float64)
    a.sort_indices()
    return a


def _deflate(X: np.ndarray) -> None:
    X -= X.mean(axis=0, keepdims=True)


def laplacian_energy(g, x: np.ndarray) -> float:
    """Quadratic form ``x^T L x`` of the graph Laplacian (column-summed for 2-D ``x``)."""
    a = _as_csr(g)
    deg = np.asarray(a.sum(axis=1)).ravel()
    x2 = x if x.ndim == 2 else x[:, None]
    lx = deg[:, None] * x2 - a @ x2
    return float(np.sum(x2 * lx))


def smooth_embed(g, k: int = 25, iters: int = 10, seed: int = 0, n_vertices: int | None = None) -> Embedding:
    """Embed the nodes of ``g`` with ``k`` smoothed random vectors.

    Vectors are drawn uniform in [-0.5, 0.5], made orthogonal to the all-one vector,
    smoothed by ``iters`` Gauss-Seidel sweeps on ``L x = 0`` (ascending node order),
    re-deflated and normalised to unit length.
    """
    if k < 1 or iters < 1:
        raise ValueError("smooth_embed needs k >= 1 and iters >= 1")
    a = _as_csr(g)
    N = a.shape[0]
    if n_vertices is None:
        n_vertices = g.n_left if isinstance(g, BipartiteGraph) else N
    rng = stream(seed, "embed")
    X = np.ascontiguousarray(rng.uniform(-0.5, 0.5, size=(N, k)))
    _deflate(X)
    _backend.gauss_seidel(a.indptr, a.indices, a.data, X, int(iters))
    _deflate(X)
    scales = np.linalg.norm(X, axis=0)
    safe = np.where(scales > 1e-300, scales, 1.0)
    X /= safe
    X[:, scales <= 1e-300] = 0.0
    return Embedding(coords=X, k=k, smoothing_iters=iters, seed=seed, n_vertices=n_vertices, scales=scales)


def dump_embedding(emb: Embedding, path) -> None:
    """Write the vertex rows as a whitespace-separated dense matrix."""
    np.savetxt(path, emb.vertex_coords, fmt="%.17g")


# --------------------------------------------------------------------------- k-means


class KMeansResult(NamedTuple):
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    history: list


def _kmeanspp(X: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((X - X[chosen[0]]) ** 2, axis=1)
    for _ in range(1, c):
        total = d2.sum()
        if total > 0:
            i = int(rng.choice(n, p=d2 / total))
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            i = int(free[rng.integers(len(free))])
        chosen.append(i)
        d2 = np.minimum(d2, np.sum((X - X[i]) ** 2, axis=1))
    return X[chosen].copy()


def _assign(X, C):
    d2 = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(X)), labels]


def kmeans(points, c: int, seed: int | np.random.Generator = 0, max_iter: int = 100, tol: float = 1e-6) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding.

    Stops after ``max_iter`` iterations or when inertia changes by less than ``tol``
    relative.  An empty cluster takes the point farthest from its centroid in the
    currently largest cluster.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if c < 1 or c > n:
        raise ValueError(f"cluster count {c} must be in [1, {n}]")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    C = _kmeanspp(X, c, rng)
    history: list[float] = []
    for _ in range(max_iter):
        labels, d2 = _assign(X, C)
        counts = np.bincount(labels, minlength=c)
        for j in np.flatnonzero(counts == 0):
            big = int(np.argmax(counts))
            members = np.flatnonzero(labels == big)
            far = members[int(np.argmax(d2[members]))]
            labels[far] = j
            d2[far] = 0.0
            counts[big] -= 1
            counts[j] = 1
        history.append(float(d2.sum()))
        for j in range(c):
            C[j] = X[labels == j].mean(axis=0)
        if len(history) > 1 and history[-2] - history[-1] <= tol * history[-2]:
            break
    inertia = float(((X - C[labels]) ** 2).sum())
    history.append(inertia)
    return KMeansResult(labels, C, inertia, history)


# --------------------------------------------------------------------------- seed clusters


@dataclass
class SeedClusterSet:
    """Disjoint seed clusters covering every vertex.

    ``origin[i]`` is the hyperedge cluster ``i`` was split from, or ``None`` for a
    singleton filling a vertex no processed hyperedge covered.
    """

    clusters: list
    origin: list

    def __len__(self) -> int:
        return len(self.clusters)

    def labels(self, n: int) -> np.ndarray:
        out = np.full(n, -1, dtype=np.int64)
        for i, members in enumerate(self.clusters):
            out[list(members)] = i
        return out


def cluster_count(cardinality: int, reduction_ratio: float) -> int:
    """Clusters per hyperedge: ``max(1, round(|e| * (1 - RR)))`` with halves rounded up."""
    return max(1, int(math.floor(cardinality * (1.0 - reduction_ratio) + 0.5)))


def initial_clusters(h: Hypergraph, emb: Embedding, reduction_ratio: float, seed: int = 0) -> SeedClusterSet:
    """Split hyperedges (largest first) into k-means clusters in embedding space.

    A hyperedge holding any already-flagged vertex is skipped; leftover vertices end
    up as singletons.
    """
    if not 0.0 < reduction_ratio < 1.0:
        raise ValueError("reduction ratio must lie in (0, 1)")
    if emb.vertex_coords.shape[0] < h.n:
        raise ValueError("embedding does not cover every vertex")
    coords = emb.vertex_coords
    sizes = h.cardinalities
    order = sorted(range(h.m), key=lambda e: (-int(sizes[e]), e))
    flagged = np.zeros(h.n, dtype=bool)
    clusters: list[tuple[int, ...]] = []
    origin: list[int | None] = []
    for e in order:
        members = h.pins[e]
        if flagged[list(members)].any():
            continue
        c = cluster_count(len(members), reduction_ratio)
        if c == 1:
            groups = [members]
        elif c >= len(members):
            groups = [(v,) for v in members]
        else:
            res = kmeans(coords[list(members)], c, stream(seed, "kmeans", e))
            groups = [tuple(v for v, lab in zip(members, res.labels) if lab == j) for j in range(c)]
        for g in groups:
            clusters.append(tuple(g))
            origin.append(e)
        flagged[list(members)] = True
    for v in np.flatnonzero(~flagged).tolist():
        clusters.append((v,))
        origin.append(None)
    return SeedClusterSet(clusters, origin)
