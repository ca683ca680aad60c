"""Pure-Python versions of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` module; used when the
extension is unavailable or ``HYPERCOARSEN_PURE_PYTHON`` is set.
"""
from __future__ import annotations

from collections import deque

import numpy as np


def gauss_seidel(indptr, indices, data, X, sweeps):
    """In-place Gauss-Seidel sweeps on ``L x = 0`` for every column of ``X``.

    Nodes are visited in ascending order; a node with no weighted neighbours is left
    unchanged.
    """
    indptr = np.asarray(indptr)
    indices = np.asarray(indices)
    data = np.asarray(data, dtype=np.float64)
    n = X.shape[0]
    rows = []
    for v in range(n):
        lo, hi = indptr[v], indptr[v + 1]
        nb = indices[lo:hi]
        w = data[lo:hi]
        d = w.sum()
        rows.append((nb, w, d) if d > 0 else None)
    for _ in range(int(sweeps)):
        for v in range(n):
            r = rows[v]
            if r is None:
                continue
            nb, w, d = r
            X[v] = (w @ X[nb]) / d


def _residual(n, tail, head, cap):
    m = len(tail)
    deg = [0] * n
    for a in range(m):
        deg[tail[a]] += 1
        deg[head[a]] += 1
    start = [0] * (n + 1)
    for v in range(n):
        start[v + 1] = start[v] + deg[v]
    pos = start[:-1]
    pos = list(pos)
    adj = [0] * (2 * m)
    to = [0] * (2 * m)
    res = [0] * (2 * m)
    for a in range(m):
        u, v = tail[a], head[a]
        f, r = 2 * a, 2 * a + 1
        to[f], to[r] = v, u
        res[f] = cap[a]
        res[r] = cap[a] - cap[a]  # zero of the capacity's type
        adj[pos[u]] = f
        pos[u] += 1
        adj[pos[v]] = r
        pos[v] += 1
    return start, adj, to, res


def dinic(n, tail, head, cap, s, t, eps=0):
    """Dinic's blocking-flow max-flow.

    ``cap`` may hold ints (exact) or floats; residual capacities ``<= eps`` count as
    saturated.  Returns ``(flow_value, source_side)`` where ``source_side`` is a
    ``uint8`` mask of nodes reachable from ``s`` in the final residual network.
    """
    tail = np.asarray(tail).tolist()
    head = np.asarray(head).tolist()
    cap = np.asarray(cap).tolist()
    start, adj, to, res = _residual(n, tail, head, cap)
    zero = cap[0] - cap[0] if cap else 0
    flow = zero
    level = [-1] * n

    def bfs():
        for i in range(n):
            level[i] = -1
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for i in range(start[u], start[u + 1]):
                a = adj[i]
                v = to[a]
                if level[v] < 0 and res[a] > eps:
                    level[v] = level[u] + 1
                    q.append(v)
        return level[t] >= 0

    if s == t:
        raise ValueError("source equals sink")
    while bfs():
        it = start[:-1]
        it = list(it)
        path: list[int] = []
        u = s
        while True:
            if u == t:
                f = min(res[a] for a in path)
                for a in path:
                    res[a] -= f
                    res[a ^ 1] += f
                flow += f
                k = 0
                while res[path[k]] > eps:
                    k += 1
                del path[k:]
                u = s if k == 0 else to[path[k - 1]]
                continue
            end = start[u + 1]
            i = it[u]
            lu = level[u] + 1
            while i < end:
                a = adj[i]
                if res[a] > eps and level[to[a]] == lu:
                    break
                i += 1
            it[u] = i
            if i < end:
                a = adj[i]
                path.append(a)
                u = to[a]
            else:
                if u == s:
                    break
                level[u] = -1
                a = path.pop()
                u = to[a ^ 1]
                it[u] += 1

    seen = np.zeros(n, dtype=np.uint8)
    seen[s] = 1
    q = deque([s])
    while q:
        u = q.popleft()
        for i in range(start[u], start[u + 1]):
            a = adj[i]
            v = to[a]
            if not seen[v] and res[a] > eps:
                seen[v] = 1
                q.append(v)
    return flow, seen
