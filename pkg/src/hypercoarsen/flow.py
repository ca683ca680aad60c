"""Strongly-local flow refinement of seed clusters.

A seed set ``R`` is grown or trimmed by repeatedly solving a max s-t flow on a
directed network built around a local sub-hypergraph.  Every hyperedge ``e`` is
replaced by two auxiliary nodes ``a_e -> a'_e`` (capacity ``w(e)``) with infinite
arcs ``v -> a_e`` and ``a'_e -> v`` for its members, so that a minimum s-t cut pays
``w(e)`` exactly when ``e`` is split.  Terminal arcs ``s -> r`` (``alpha * d_r``, for
``r`` in ``R``) and ``j -> t`` (``alpha * delta * d_j`` otherwise) complete the
objective ``cut(S) + alpha * vol(R \\ S) + alpha * delta * vol(S \\ R)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _backend
from .hypergraph import Hypergraph, VertexSet, cut, volume

INNER_SOLVE_CAP = 64


def _as_set(s) -> frozenset:
    if isinstance(s, VertexSet):
        return s.members
    if isinstance(s, frozenset):
        return s
    return frozenset(int(v) for v in s)


def local_neighborhood(h: Hypergraph, s: Iterable[int]) -> set[int]:
    """All vertices sharing a hyperedge with some member of ``s`` (``s`` included)."""
    out: set[int] = set()
    for v in _as_set(s):
        out.add(v)
        for e in h.incidence[v]:
            out.update(h.pins[e])
    return out


def hlc(h: Hypergraph, s: Iterable[int], r: Iterable[int], delta: float) -> float:
    """Local conductance of ``S`` relative to seed ``R``.

    ``cut(S) / (vol(S & R) - delta * vol(S - R))``; ``inf`` for the empty set or a
    nonpositive denominator.
    """
    R = _as_set(r)
    if not R:
        raise ValueError("hlc needs a nonempty seed set")
    S = _as_set(s)
    if not S:
        return math.inf
    inside = volume(h, S & R)
    outside = volume(h, S - R)
    den = inside - delta * outside
    if den <= 0:
        return math.inf
    return cut(h, S) / den


class LocalHypergraph:
    """Incrementally grown vertex set ``V_L`` plus the hyperedges touching it.

    ``allowed`` (boolean mask over ``V``) confines growth, e.g. to one part of a
    partitioning.  Pins outside ``V_L`` are never expanded; in the flow network they
    are tied to the sink.  ``touched`` records every vertex id read so far.
    """

    def __init__(self, h: Hypergraph, vertices: Iterable[int] = (), allowed: np.ndarray | None = None):
        self.h = h
        self.allowed = allowed
        self._members: set[int] = set()
        self.touched: set[int] = set()
        self._cache = None
        self.expand(vertices)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, v) -> bool:
        return v in self._members

    def expand(self, vertices: Iterable[int]) -> int:
        allowed = self.allowed
        added = 0
        for v in vertices:
            v = int(v)
            if v in self._members:
                continue
            if allowed is not None and not allowed[v]:
                continue
            self._members.add(v)
            self.touched.add(v)
            added += 1
        if added:
            self._cache = None
        return added

    def expand_neighborhood(self, s: Iterable[int]) -> int:
        nb = local_neighborhood(self.h, s)
        self.touched.update(nb)
        return self.expand(sorted(nb))

    def hyperedges(self) -> list[int]:
        """Sorted ids of hyperedges with at least one pin in ``V_L``."""
        return self._structure()[1]

    def frontier(self) -> set[int]:
        """Pins of local hyperedges lying outside ``V_L``."""
        out = set()
        for e in self.hyperedges():
            out.update(v for v in self.h.pins[e] if v not in self._members)
        return out

    def _structure(self):
        if self._cache is not None:
            return self._cache
        h = self.h
        verts = sorted(self._members)
        node = {v: 2 + i for i, v in enumerate(verts)}
        edges = sorted({e for v in verts for e in h.incidence[v]})
        base = 2 + len(verts)
        tail: list[int] = []
        head: list[int] = []
        inner_tail: list[int] = []
        inner_head: list[int] = []
        inner_w: list[float] = []
        weights = h.weight_list
        for j, e in enumerate(edges):
            a = base + 2 * j
            b = a + 1
            inner_tail.append(a)
            inner_head.append(b)
            inner_w.append(weights[e])
            outside = False
            for v in h.pins[e]:
                x = node.get(v)
                if x is None:
                    outside = True
                    self.touched.add(v)
                    continue
                tail += (x, b)
                head += (a, x)
            if outside:
                tail.append(b)
                head.append(1)
        deg = np.array([h.deg_list[v] for v in verts], dtype=np.float64)
        self._cache = (
            verts,
            edges,
            base + 2 * len(edges),
            np.array(inner_tail, dtype=np.int64),
            np.array(inner_head, dtype=np.int64),
            np.array(inner_w, dtype=np.float64),
            np.array(tail, dtype=np.int64),
            np.array(head, dtype=np.int64),
            deg,
        )
        return self._cache


@dataclass
class FlowNetwork:
    """Directed capacitated network; node 0 is the source, node 1 the sink.

    Nodes ``2 .. 2 + len(vertices) - 1`` stand for ``vertices`` (sorted hypergraph ids);
    the rest are hyperedge auxiliaries.  ``inf`` is the finite stand-in for infinite
    capacity and ``eps`` the saturation tolerance used by the solver.
    """

    n_nodes: int
    tail: np.ndarray
    head: np.ndarray
    cap: np.ndarray
    vertices: list
    inf: float | int
    eps: float | int = 0
    source: int = 0
    sink: int = 1

    @property
    def n_arcs(self) -> int:
        return int(self.tail.shape[0])

    def vertex_side(self, mask: np.ndarray) -> frozenset:
        nv = len(self.vertices)
        sel = np.flatnonzero(mask[2: 2 + nv])
        return frozenset(self.vertices[i] for i in sel.tolist())

    def cut_value(self, source_side_nodes: Iterable[int]):
        """Total capacity of arcs leaving the given node set."""
        inside = np.zeros(self.n_nodes, dtype=bool)
        inside[list(source_side_nodes)] = True
        sel = inside[self.tail] & ~inside[self.head]
        return self.cap[sel].sum()

    def dump(self, dest) -> None:
        """Write ``from to capacity`` lines (header ``n_nodes n_arcs source sink``)."""
        lines = [f"{self.n_nodes} {self.n_arcs} {self.source} {self.sink}"]
        for a, b, c in zip(self.tail.tolist(), self.head.tolist(), self.cap.tolist()):
            lines.append(f"{a} {b} {c!r}" if isinstance(c, float) else f"{a} {b} {c}")
        text = "\n".join(lines) + "\n"
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", encoding="utf-8") as f:
                f.write(text)


def build_flow_network(
    hl: LocalHypergraph,
    r: Iterable[int],
    delta: float,
    alpha: float = 1.0,
    capacity_scale: int | None = None,
) -> FlowNetwork:
    """Flow network whose min cut minimises ``cut(S) + alpha*vol(R-S) + alpha*delta*vol(S-R)``
    over ``S`` within ``V_L``.

    Degrees come from the global hypergraph.  With ``capacity_scale`` every finite
    capacity is multiplied by it and must land on an integer; the network then uses
    exact int64 arithmetic.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    R = _as_set(r)
    if not R <= hl.vertices:
        raise ValueError("seed set must lie inside the local vertex set")
    verts, _, n_nodes, it_, ih_, iw, gt, gh, deg = hl._structure()
    nv = len(verts)
    in_r = np.fromiter((v in R for v in verts), dtype=bool, count=nv)
    nodes = np.arange(2, 2 + nv, dtype=np.int64)
    src_nodes = nodes[in_r]
    snk_nodes = nodes[~in_r]
    src_cap = alpha * deg[in_r]
    snk_cap = alpha * delta * deg[~in_r]

    tail = np.concatenate((np.zeros(len(src_nodes), np.int64), snk_nodes, it_, gt))
    head = np.concatenate((src_nodes, np.ones(len(snk_nodes), np.int64), ih_, gh))
    finite = np.concatenate((src_cap, snk_cap, iw))
    n_inf = len(gt)
    if capacity_scale is None:
        total = math.fsum(finite.tolist())
        inf = 1.0 + total
        cap = np.concatenate((finite, np.full(n_inf, inf)))
        eps = 1e-12 * max(total, 1.0)
    else:
        scaled = finite * capacity_scale
        ints = np.rint(scaled)
        if np.any(np.abs(scaled - ints) > 1e-9 * np.maximum(1.0, np.abs(scaled))):
            raise ValueError("capacities are not integral after scaling")
        ints = ints.astype(np.int64)
        inf = int(ints.sum()) + 1
        cap = np.concatenate((ints, np.full(n_inf, inf, dtype=np.int64)))
        eps = 0
    return FlowNetwork(n_nodes, tail, head, cap, verts, inf, eps)


@dataclass
class FlowResult:
    value: float | int
    source_side: frozenset
    mask: np.ndarray = field(repr=False)


def max_flow(net: FlowNetwork) -> FlowResult:
    """Exact max flow (Dinic); the min-cut side is what the source still reaches."""
    value, mask = _backend.dinic(net.n_nodes, net.tail, net.head, net.cap, net.source, net.sink, net.eps)
    if value >= net.inf:
        raise RuntimeError("unbounded flow: an infinite-capacity s-t path exists")
    return FlowResult(value, net.vertex_side(mask), mask)


@dataclass
class RefineResult:
    """Outcome of :func:`flow_refine`.

    ``history`` holds the best HLC after each outer iteration, starting with the
    seed's own value.  ``touched`` counts every vertex id read; it never exceeds
    ``local_size + frontier``.
    """

    members: frozenset
    hlc: float
    seed_hlc: float
    history: list
    iterations: int
    flow_solves: int
    local_size: int
    touched: int
    frontier: int = 0


def flow_refine(
    h: Hypergraph,
    r: Iterable[int],
    delta: float = 0.5,
    epsilon: float = 0.01,
    max_iters: int = 20,
    allowed: np.ndarray | None = None,
) -> RefineResult:
    """Grow/trim seed ``R`` to a set of low local conductance.

    Each outer iteration enlarges ``V_L`` by the neighbourhood of the current set,
    then re-solves the flow problem with ``alpha`` set to the best HLC so far until
    no strictly better set appears.  The loop stops once an iteration improves HLC
    by at most ``epsilon``.  The returned set is never worse than ``R``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    R = _as_set(r)
    if not R:
        raise ValueError("flow_refine needs a nonempty seed set")
    if allowed is not None and not all(allowed[v] for v in R):
        raise ValueError("seed set leaves the allowed region")
    best = hlc(h, R, R, delta)
    S = R
    hl = LocalHypergraph(h, sorted(R), allowed)
    history = [best]
    solves = 0
    iterations = 0
    while iterations < max_iters and math.isfinite(best) and best > 0:
        iterations += 1
        prev = best
        hl.expand_neighborhood(S)
        for _ in range(INNER_SOLVE_CAP):
            net = build_flow_network(hl, R, delta, alpha=best)
            res = max_flow(net)
            solves += 1
            cand = res.source_side
            if not cand:
                break
            val = hlc(h, cand, R, delta)
            if not val < best * (1.0 - 1e-12):
                break
            S, best = cand, val
            if best == 0:
                break
        history.append(best)
        if abs(prev - best) <= epsilon:
            break
    return RefineResult(
        S, best, history[0], history, iterations, solves, len(hl), len(hl.touched), len(hl.frontier())
    )
