# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Gauss-Seidel smoothing and Dinic max-flow."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef fused cap_t:
    long long
    double


def gauss_seidel(indptr, indices, data, double[:, ::1] X, long sweeps):
    cdef long long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] w = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t k = X.shape[1]
    cdef Py_ssize_t v, j, c, it
    cdef long long u
    cdef double d, wj
    cdef double *acc = <double *> malloc(max(k, 1) * sizeof(double))
    if acc == NULL:
        raise MemoryError()
    try:
        with nogil:
            for it in range(sweeps):
                for v in range(n):
                    d = 0.0
                    for c in range(k):
                        acc[c] = 0.0
                    for j in range(ip[v], ip[v + 1]):
                        u = ix[j]
                        wj = w[j]
                        d = d + wj
                        for c in range(k):
                            acc[c] = acc[c] + wj * X[u, c]
                    if d > 0.0:
                        for c in range(k):
                            X[v, c] = acc[c] / d
    finally:
        free(acc)


cdef cap_t _dinic_core(Py_ssize_t n, Py_ssize_t m, long long[::1] tail, long long[::1] head,
                       cap_t[::1] cap, long long s, long long t, cap_t eps,
                       cap_t[::1] res, long long[::1] to, long long[::1] adj,
                       long long[::1] start, long long[::1] level, long long[::1] it,
                       long long[::1] queue, long long[::1] path, unsigned char[::1] seen) noexcept nogil:
    cdef Py_ssize_t a, i, qh, qt, k, plen, end
    cdef long long u, v, lu
    cdef cap_t flow = 0
    cdef cap_t f

    for a in range(n + 1):
        start[a] = 0
    for a in range(m):
        start[tail[a] + 1] += 1
        start[head[a] + 1] += 1
    for a in range(n):
        start[a + 1] += start[a]
    for a in range(n):
        it[a] = start[a]
    for a in range(m):
        u = tail[a]
        v = head[a]
        to[2 * a] = v
        to[2 * a + 1] = u
        res[2 * a] = cap[a]
        res[2 * a + 1] = 0
        adj[it[u]] = 2 * a
        it[u] += 1
        adj[it[v]] = 2 * a + 1
        it[v] += 1

    while True:
        for a in range(n):
            level[a] = -1
        level[s] = 0
        qh = 0
        qt = 0
        queue[qt] = s
        qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for i in range(start[u], start[u + 1]):
                a = adj[i]
                v = to[a]
                if level[v] < 0 and res[a] > eps:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
        if level[t] < 0:
            break
        for a in range(n):
            it[a] = start[a]
        plen = 0
        u = s
        while True:
            if u == t:
                f = res[path[0]]
                for k in range(1, plen):
                    if res[path[k]] < f:
                        f = res[path[k]]
                for k in range(plen):
                    res[path[k]] -= f
                    res[path[k] ^ 1] += f
                flow += f
                k = 0
                while res[path[k]] > eps:
                    k += 1
                plen = k
                if k == 0:
                    u = s
                else:
                    u = to[path[k - 1]]
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
                path[plen] = a
                plen += 1
                u = to[a]
            else:
                if u == s:
                    break
                level[u] = -1
                plen -= 1
                a = path[plen]
                u = to[a ^ 1]
                it[u] += 1

    for a in range(n):
        seen[a] = 0
    seen[s] = 1
    qh = 0
    qt = 0
    queue[qt] = s
    qt += 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for i in range(start[u], start[u + 1]):
            a = adj[i]
            v = to[a]
            if seen[v] == 0 and res[a] > eps:
                seen[v] = 1
                queue[qt] = v
                qt += 1
    return flow


def dinic(n, tail, head, cap, s, t, eps=0):
    cdef Py_ssize_t nn = n
    cdef long long[::1] tl = np.ascontiguousarray(tail, dtype=np.int64)
    cdef long long[::1] hd = np.ascontiguousarray(head, dtype=np.int64)
    cdef Py_ssize_t m = tl.shape[0]
    if s == t:
        raise ValueError("source equals sink")
    cdef long long[::1] to = np.empty(2 * m, dtype=np.int64)
    cdef long long[::1] adj = np.empty(2 * m, dtype=np.int64)
    cdef long long[::1] start = np.empty(nn + 1, dtype=np.int64)
    cdef long long[::1] level = np.empty(nn, dtype=np.int64)
    cdef long long[::1] itp = np.empty(nn, dtype=np.int64)
    cdef long long[::1] queue = np.empty(nn + 1, dtype=np.int64)
    cdef long long[::1] path = np.empty(nn + 1, dtype=np.int64)
    seen_arr = np.empty(nn, dtype=np.uint8)
    cdef unsigned char[::1] seen = seen_arr
    cdef long long[::1] cap_i
    cdef double[::1] cap_f
    cdef long long[::1] res_i
    cdef double[::1] res_f
    cdef long long flow_i, eps_i
    cdef double flow_f, eps_f
    cdef long long ss = s, tt = t
    arr = np.asarray(cap)
    if np.issubdtype(arr.dtype, np.integer):
        cap_i = np.ascontiguousarray(arr, dtype=np.int64)
        res_i = np.empty(2 * m, dtype=np.int64)
        eps_i = int(eps)
        with nogil:
            flow_i = _dinic_core(nn, m, tl, hd, cap_i, ss, tt, eps_i, res_i, to, adj,
                                 start, level, itp, queue, path, seen)
        return int(flow_i), seen_arr
    cap_f = np.ascontiguousarray(arr, dtype=np.float64)
    res_f = np.empty(2 * m, dtype=np.float64)
    eps_f = float(eps)
    with nogil:
        flow_f = _dinic_core(nn, m, tl, hd, cap_f, ss, tt, eps_f, res_f, to, adj,
                             start, level, itp, queue, path, seen)
    return float(flow_f), seen_arr
