"""Synthetic hypergraph families used by the tests, benchmarks and the oracle suite."""
from __future__ import annotations

import numpy as np

from .hypergraph import Hypergraph


def random_hypergraph(n: int, m: int, seed: int = 0, max_card: int | None = None, weighted: bool = False) -> Hypergraph:
    """``m`` hyperedges with uniformly random pins (cardinality 1..max_card)."""
    rng = np.random.default_rng(seed)
    max_card = min(max_card or n, n)
    pins = []
    for _ in range(m):
        c = int(rng.integers(1, max_card + 1))
        pins.append(sorted(rng.choice(n, size=c, replace=False).tolist()))
    w = rng.integers(1, 5, size=m).astype(float) if weighted else None
    return Hypergraph(n, pins, w)


def planted_clusters(seed: int = 0, size: int = 20, n_clusters: int = 2, internal: int = 30, max_bridges: int = 2):
    """Dense planted clusters joined by a few 2-pin bridges.

    Each cluster carries one spanning hyperedge plus ``internal`` random hyperedges of
    2 to 4 pins; consecutive clusters are joined by 1..``max_bridges`` bridges.
    Returns ``(h, labels)``.
    """
    rng = np.random.default_rng(seed)
    n = size * n_clusters
    pins: list[list[int]] = []
    for c in range(n_clusters):
        base = c * size
        pins.append(list(range(base, base + size)))
        for _ in range(internal):
            k = int(rng.integers(2, 5))
            pins.append(sorted((base + rng.choice(size, size=k, replace=False)).tolist()))
    for c in range(n_clusters - 1):
        for _ in range(int(rng.integers(1, max_bridges + 1))):
            a = c * size + int(rng.integers(size))
            b = (c + 1) * size + int(rng.integers(size))
            pins.append([a, b])
    labels = np.repeat(np.arange(n_clusters), size)
    return Hypergraph(n, pins), labels


def two_cliques(size: int, bridge: bool = True) -> Hypergraph:
    """Two 2-uniform cliques on ``size`` vertices each, optionally joined by one edge."""
    pins = []
    for base in (0, size):
        pins += [[base + i, base + j] for i in range(size) for j in range(i + 1, size)]
    if bridge:
        pins.append([size - 1, size])
    return Hypergraph(2 * size, pins)


def path_graph(n: int) -> Hypergraph:
    return Hypergraph(n, [[i, i + 1] for i in range(n - 1)])


def geometric_hypergraph(n: int, seed: int = 0, mean_card: float = 3.0) -> Hypergraph:
    """Vertices on a 2-D grid; each net joins a vertex with some of its grid neighbours.

    Nets are local so the hypergraph has large diameter, which makes it a good
    testbed for locality.
    """
    rng = np.random.default_rng(seed)
    side = int(np.ceil(np.sqrt(n)))
    pins = []
    for v in range(n):
        x, y = divmod(v, side)
        k = max(1, int(rng.poisson(mean_card - 1)))
        cand = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                u = (x + dx) * side + (y + dy)
                if (dx or dy) and 0 <= x + dx and 0 <= y + dy < side and u < n:
                    cand.append(u)
        k = min(k, len(cand))
        pins.append(sorted([v] + rng.choice(cand, size=k, replace=False).tolist()))
    return Hypergraph(n, pins)


def vlsi_like(n: int, seed: int = 0, nets_per_cell: float = 1.1, locality: int = 3) -> Hypergraph:
    """Netlist-shaped hypergraph: grid-placed cells, mostly 2-3 pin nets, heavy tail of large nets.

    Net sizes follow a truncated power law (``P(k) ~ k^-2.5``, 2..200 pins); pins are
    drawn from a window around a random driver cell whose radius grows with the net
    size.  Every cell gets at least one net.
    """
    rng = np.random.default_rng(seed)
    side = int(np.ceil(np.sqrt(n)))
    m = int(round(nets_per_cell * n))
    ks = np.arange(2, 201)
    p = ks.astype(float) ** -2.5
    p /= p.sum()
    sizes = rng.choice(ks, size=m, p=p)
    covered = np.zeros(n, dtype=bool)
    drivers = rng.permutation(n)
    pins = []
    for i, k in enumerate(sizes.tolist()):
        v = int(drivers[i % n])
        x, y = divmod(v, side)
        r = locality + int(np.sqrt(k))
        members = {v}
        tries = 0
        while len(members) < k and tries < 20 * k:
            tries += 1
            ux = x + int(rng.integers(-r, r + 1))
            uy = y + int(rng.integers(-r, r + 1))
            u = ux * side + uy
            if 0 <= ux and 0 <= uy < side and u < n:
                members.add(u)
        if len(members) < 2:
            continue
        pins.append(sorted(members))
        covered[list(members)] = True
    for v in np.flatnonzero(~covered).tolist():
        u = v + 1 if v + 1 < n else v - 1
        pins.append(sorted((v, u)))
    return Hypergraph(n, pins)
