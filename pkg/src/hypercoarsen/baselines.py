"""Reference coarseners for comparison: random contraction and heavy-edge matching."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .hypergraph import Hypergraph, clique_expand, star_expand
from .rng import stream


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        if a > b:
            a, b = b, a
        self.parent[b] = a
        return a


def target_clusters(n: int, rr: float) -> int:
    if not 0.0 < rr < 1.0:
        raise ValueError("reduction ratio must lie in (0, 1)")
    return max(1, int(np.floor(n * (1.0 - rr) + 0.5)))


def _labels(dsu: _DSU, n: int) -> np.ndarray:
    roots = np.array([dsu.find(v) for v in range(n)], dtype=np.int64)
    _, lab = np.unique(roots, return_inverse=True)
    return lab.astype(np.int64)


def random_contraction(h: Hypergraph, rr: float, seed: int = 0) -> np.ndarray:
    """Contract random pin pairs of random hyperedges until ``n(1-RR)`` clusters remain.

    Once every hyperedge lies inside one cluster, random cluster pairs are merged.
    Returns a vertex -> cluster label array.
    """
    target = target_clusters(h.n, rr)
    rng = stream(seed, "baseline")
    dsu = _DSU(h.n)
    count = h.n
    live = [e for e in range(h.m) if len(h.pins[e]) > 1]
    while count > target and live:
        i = int(rng.integers(len(live)))
        p = h.pins[live[i]]
        roots = {dsu.find(v) for v in p}
        if len(roots) < 2:
            live[i] = live[-1]
            live.pop()
            continue
        a, b = rng.choice(len(p), size=2, replace=False)
        if dsu.find(p[a]) != dsu.find(p[b]):
            dsu.union(p[a], p[b])
            count -= 1
    while count > target:
        roots = sorted({dsu.find(v) for v in range(h.n)})
        a, b = rng.choice(len(roots), size=2, replace=False)
        dsu.union(roots[a], roots[b])
        count -= 1
    return _labels(dsu, h.n)


def heavy_edge_matching(a: sp.spmatrix, n_keep: int, target: int) -> np.ndarray:
    """Greedy heaviest-edge matching passes on a simple graph until ``target`` clusters remain.

    Only the first ``n_keep`` nodes are counted (auxiliary nodes such as star centres
    may join clusters but do not count).  In each pass every cluster is matched at
    most once; edges are visited by descending weight, ties by node ids.
    """
    a = sp.coo_matrix(sp.triu(a, k=1))
    order = np.lexsort((a.col, a.row, -a.data))
    rows = a.row[order].tolist()
    cols = a.col[order].tolist()
    N = a.shape[0]
    dsu = _DSU(N)
    keep = np.zeros(N, dtype=bool)
    keep[:n_keep] = True
    has_kept = keep.copy()
    count = n_keep
    while count > target:
        matched: set[int] = set()
        merged = False
        for u, v in zip(rows, cols):
            ru, rv = dsu.find(u), dsu.find(v)
            if ru == rv or ru in matched or rv in matched:
                continue
            both = has_kept[ru] and has_kept[rv]
            r = dsu.union(ru, rv)
            has_kept[r] = has_kept[ru] or has_kept[rv]
            matched.update((ru, rv))
            merged = True
            if both:
                count -= 1
                if count <= target:
                    break
        if not merged:
            break
    roots = np.array([dsu.find(v) for v in range(n_keep)], dtype=np.int64)
    _, lab = np.unique(roots, return_inverse=True)
    return lab.astype(np.int64)


def star_matching(h: Hypergraph, rr: float) -> np.ndarray:
    """Heavy-edge matching on the star-expanded bipartite graph; star nodes are dropped."""
    return heavy_edge_matching(star_expand(h).adjacency(), h.n, target_clusters(h.n, rr))


def clique_matching(h: Hypergraph, rr: float, max_cardinality: int = 50) -> np.ndarray:
    """Heavy-edge matching on the clique expansion (large nets become star nodes)."""
    return heavy_edge_matching(clique_expand(h, max_cardinality), h.n, target_clusters(h.n, rr))


BASELINES = {
    "random": lambda h, rr, seed: random_contraction(h, rr, seed),
    "star": lambda h, rr, seed: star_matching(h, rr),
    "clique": lambda h, rr, seed: clique_matching(h, rr),
}
