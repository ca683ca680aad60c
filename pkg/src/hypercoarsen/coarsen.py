"""Divide-and-conquer coarsening: partition, refine seed clusters by flow, contract."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .embed import Embedding, SeedClusterSet, initial_clusters, smooth_embed
from .flow import flow_refine, hlc
from .hypergraph import Hypergraph, star_expand
from .metrics import local_conductance_report
from .partition import Partitioning, load_partition_file, partition, principal_projection


class ConfigError(ValueError):
    """Out-of-range coarsening parameter."""


@dataclass(frozen=True)
class CoarsenConfig:
    rr: float = 0.75
    k: int = 25
    iters: int = 10
    delta: float = 0.5
    epsilon: float = 0.01
    max_iters: int = 20
    parts: int | None = None
    seed: int = 0
    threads: int | None = None
    dedup: bool = False
    prune_singletons: bool = False
    partition_file: str | None = None

    def validate(self) -> "CoarsenConfig":
        if not 0.0 < self.rr < 1.0:
            raise ConfigError(f"rr must be in (0, 1), got {self.rr}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.iters < 1:
            raise ConfigError("iters must be >= 1")
        if not self.delta > 0:
            raise ConfigError("delta must be > 0")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be > 0")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.parts is not None and self.parts < 1:
            raise ConfigError("parts must be >= 1")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        return self

    def result_affecting(self) -> dict:
        """Parameters that determine the output (thread count excluded)."""
        d = asdict(self)
        d.pop("threads")
        return d


def default_parts(n: int) -> int:
    return max(1, n // 5000)


# --------------------------------------------------------------------------- clusters


@dataclass
class ClusterAssignment:
    """Total, disjoint vertex clustering.

    ``hlc[i]``/``seed_hlc[i]`` are cluster ``i``'s local conductance after refinement
    and that of the seed it grew from (both relative to the seed actually used);
    ``origin[i]`` is the seed cluster id or ``None`` for a leftover singleton.
    """

    cluster_of: np.ndarray
    clusters: list
    hlc: list = field(default_factory=list)
    seed_hlc: list = field(default_factory=list)
    origin: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.clusters)

    @classmethod
    def from_labels(cls, labels) -> "ClusterAssignment":
        labels = np.asarray(labels, dtype=np.int64)
        if labels.size and labels.min() < 0:
            raise ValueError("assignment is not total")
        _, compact = np.unique(labels, return_inverse=True)
        clusters = [[] for _ in range(int(compact.max()) + 1 if compact.size else 0)]
        for v, c in enumerate(compact.tolist()):
            clusters[c].append(v)
        return cls._canonical([tuple(c) for c in clusters], len(labels))

    @classmethod
    def from_clusters(cls, clusters, n: int) -> "ClusterAssignment":
        return cls._canonical([tuple(sorted(c)) for c in clusters], n)

    @classmethod
    def _canonical(cls, clusters, n, hlc_=None, seed_hlc=None, origin=None, history=None):
        if any(len(c) == 0 for c in clusters):
            raise ValueError("empty cluster")
        order = sorted(range(len(clusters)), key=lambda i: clusters[i][0])
        clusters = [clusters[i] for i in order]

        def pick(xs):
            return [xs[i] for i in order]

        cluster_of = np.full(n, -1, dtype=np.int64)
        for i, c in enumerate(clusters):
            if np.any(cluster_of[list(c)] >= 0):
                raise ValueError("clusters overlap")
            cluster_of[list(c)] = i
        if np.any(cluster_of < 0):
            raise ValueError("assignment is not total")
        return cls(
            cluster_of,
            clusters,
            pick(hlc_) if hlc_ is not None else [],
            pick(seed_hlc) if seed_hlc is not None else [],
            pick(origin) if origin is not None else [],
            pick(history) if history is not None else [],
        )


def contract(h: Hypergraph, assignment: ClusterAssignment, dedup: bool = False, prune_singletons: bool = False):
    """Merge each cluster into one coarse vertex.

    Returns ``(coarse, vertex_map)``.  Coarse vertex weight is the sum of member
    weights; hyperedge ``j`` maps to the set of its pins' clusters unless ``dedup``
    merges identical images or ``prune_singletons`` drops single-pin images.
    """
    cmap = np.asarray(assignment.cluster_of, dtype=np.int64)
    if cmap.shape != (h.n,) or (h.n and cmap.min() < 0):
        raise ValueError("assignment is not total")
    nc = len(assignment.clusters)
    vw = np.zeros(nc)
    np.add.at(vw, cmap, h.vertex_weights)
    cm = cmap.tolist()
    pins = []
    weights = []
    for p, w in zip(h.pins, h.weight_list):
        img = tuple(sorted({cm[v] for v in p}))
        if prune_singletons and len(img) <= 1:
            continue
        pins.append(img)
        weights.append(w)
    coarse = Hypergraph(nc, pins, weights, vw)
    if dedup:
        coarse = coarse.deduplicated()
    return coarse, cmap.copy()


# --------------------------------------------------------------------------- pipeline


@dataclass
class CoarseningResult:
    coarse: Hypergraph
    vertex_map: np.ndarray
    assignment: ClusterAssignment
    metrics: dict
    config: CoarsenConfig
    embedding: Embedding = field(repr=False)
    seeds: SeedClusterSet = field(repr=False)
    partitioning: Partitioning = field(repr=False)


def _assign_seeds_to_parts(seeds: SeedClusterSet, parts: np.ndarray, n_parts: int):
    """Seed lists per part as ``(seed_id, members)``.

    A seed straddling parts goes to the part holding most of its members (lowest id
    on ties); the members outside that part become singleton seeds in their own part.
    """
    per_part: list[list[tuple[int, tuple]]] = [[] for _ in range(n_parts)]
    extra: list[tuple[int, int]] = []
    for sid, members in enumerate(seeds.clusters):
        ps = parts[list(members)]
        counts = np.bincount(ps, minlength=n_parts)
        home = int(np.argmax(counts))
        per_part[home].append((sid, tuple(v for v, q in zip(members, ps.tolist()) if q == home)))
        for v, q in zip(members, ps.tolist()):
            if q != home:
                extra.append((q, v))
    next_id = len(seeds.clusters)
    for q, v in extra:
        per_part[q].append((next_id, (v,)))
        next_id += 1
    return per_part


def _refine_part(h, seeds, allowed, cfg: CoarsenConfig):
    out = []
    for sid, members in seeds:
        res = flow_refine(h, members, cfg.delta, cfg.epsilon, cfg.max_iters, allowed=allowed)
        out.append((sid, members, res))
    return out


def refine_clusters(h: Hypergraph, seeds: SeedClusterSet, partitioning: Partitioning, cfg: CoarsenConfig) -> ClusterAssignment:
    """Flow-refine every seed inside its part, then claim vertices in (part, seed) order."""
    P = partitioning.n_parts
    per_part = _assign_seeds_to_parts(seeds, partitioning.parts, P)
    masks = [partitioning.parts == j for j in range(P)] if P > 1 else [None]
    threads = cfg.threads or os.cpu_count() or 1
    if threads > 1 and P > 1:
        with ThreadPoolExecutor(max_workers=min(threads, P)) as pool:
            results = list(pool.map(lambda j: _refine_part(h, per_part[j], masks[j], cfg), range(P)))
    else:
        results = [_refine_part(h, per_part[j], masks[j], cfg) for j in range(P)]

    claimed = np.zeros(h.n, dtype=bool)
    clusters, hlcs, seed_hlcs, origin, history = [], [], [], [], []
    for part_results in results:
        for sid, members, res in part_results:
            R = [v for v in members if not claimed[v]]
            if not R:
                continue
            seed_val = hlc(h, R, R, cfg.delta)
            S = sorted(v for v in res.members if not claimed[v])
            val = hlc(h, S, R, cfg.delta) if S else math.inf
            if not val <= seed_val:
                S, val = sorted(R), seed_val
            claimed[S] = True
            clusters.append(tuple(S))
            hlcs.append(val)
            seed_hlcs.append(seed_val)
            origin.append(sid)
            intact = len(R) == len(members) and S == sorted(res.members)
            history.append(list(res.history) if intact else [seed_val, val])
    for v in np.flatnonzero(~claimed).tolist():
        val = hlc(h, [v], [v], cfg.delta)
        clusters.append((v,))
        hlcs.append(val)
        seed_hlcs.append(val)
        origin.append(None)
        history.append([val])
    return ClusterAssignment._canonical(clusters, h.n, hlcs, seed_hlcs, origin, history)


def coarsen(h: Hypergraph, config: CoarsenConfig | None = None, embedding: Embedding | None = None) -> CoarseningResult:
    """Embed, seed, partition, flow-refine and contract ``h``."""
    cfg = (config or CoarsenConfig()).validate()
    if h.n == 0:
        raise ConfigError("cannot coarsen an empty hypergraph")
    wall = {}
    t = time.perf_counter()
    emb = embedding if embedding is not None else smooth_embed(star_expand(h), cfg.k, cfg.iters, cfg.seed)
    wall["embed"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    seeds = initial_clusters(h, emb, cfg.rr, cfg.seed)
    wall["initial_clusters"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    if cfg.partition_file:
        partitioning = load_partition_file(cfg.partition_file, h.n)
    else:
        partitioning = partition(h, emb, min(cfg.parts or default_parts(h.n), h.n))
    wall["partition"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    assignment = refine_clusters(h, seeds, partitioning, cfg)
    wall["refine"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    coarse, vmap = contract(h, assignment, cfg.dedup, cfg.prune_singletons)
    wall["contract"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    report = local_conductance_report(h, assignment.clusters, cfg.delta)
    wall["metrics"] = (time.perf_counter() - t) * 1e3
    wall["total"] = sum(wall.values())

    metrics = {
        "rr": cfg.rr,
        "n": h.n,
        "m": h.m,
        "n_coarse": coarse.n,
        "m_coarse": coarse.m,
        "parts": partitioning.n_parts,
        "n_seeds": len(seeds),
        "phi_avg": report["phi_avg"],
        "zero_volume_clusters": report["excluded"],
        "delta": cfg.delta,
        "wall_ms": wall,
    }
    return CoarseningResult(coarse, vmap, assignment, metrics, cfg, emb, seeds, partitioning)


# --------------------------------------------------------------------------- balanced k-way


def part_capacity(n: int, nparts: int, ubfactor: float) -> int:
    return int(math.floor((1.0 + ubfactor / 100.0) * n / nparts + 1e-9))


def balanced_assign(
    h: Hypergraph,
    emb: Embedding,
    nparts: int,
    ubfactor: float,
    config: CoarsenConfig | None = None,
) -> Partitioning:
    """Use the coarsening clusters as a k-way partitioner with a size cap per part.

    The cap is ``floor((1 + ubfactor/100) * n / nparts)``.  Part nuclei are chosen by
    farthest-point traversal over cluster centroids; the remaining clusters join the
    nearest part with room, and vertices that do not fit go to the nearest non-full
    part by Euclidean distance to the part centroid.
    """
    n = h.n
    if nparts < 2:
        raise ValueError("nparts must be >= 2")
    if nparts > n:
        raise ValueError("nparts exceeds the vertex count")
    if ubfactor < 0:
        raise ValueError("ubfactor must be >= 0")
    cap = part_capacity(n, nparts, ubfactor)
    if nparts * cap < n:
        raise ValueError(f"infeasible: {nparts} parts of capacity {cap} cannot hold {n} vertices")
    if nparts == n:
        return Partitioning(np.arange(n, dtype=np.int64))
    X = emb.vertex_coords
    cfg = replace(config or CoarsenConfig(), rr=1.0 - nparts / n)
    res = coarsen(h, cfg, embedding=emb)
    clusters = [np.array(c, dtype=np.int64) for c in res.assignment.clusters]

    # split the largest cluster until there is one per part
    while len(clusters) < nparts:
        i = max(range(len(clusters)), key=lambda j: (len(clusters[j]), -int(clusters[j][0])))
        c = clusters.pop(i)
        proj = principal_projection(X[c])
        order = c[np.lexsort((c, proj))]
        half = len(order) // 2
        clusters += [np.sort(order[:half]), np.sort(order[half:])]
    clusters.sort(key=lambda c: (-len(c), int(c[0])))
    cent = np.array([X[c].mean(axis=0) for c in clusters])

    nuclei = [0]
    dmin = np.sum((cent - cent[0]) ** 2, axis=1)
    while len(nuclei) < nparts:
        dm = dmin.copy()
        dm[nuclei] = -1.0
        j = int(np.argmax(dm))
        nuclei.append(j)
        dmin = np.minimum(dmin, np.sum((cent - cent[j]) ** 2, axis=1))

    parts = np.full(n, -1, dtype=np.int64)
    size = np.zeros(nparts, dtype=np.int64)
    psum = np.zeros((nparts, X.shape[1]))
    overflow: list[int] = []

    def place(members: np.ndarray, q: int) -> None:
        ctr = psum[q] / size[q] if size[q] else X[members].mean(axis=0)
        room = cap - size[q]
        if len(members) > room:
            d = np.sum((X[members] - ctr) ** 2, axis=1)
            order = members[np.lexsort((members, d))]
            members, rest = order[:room], order[room:]
            overflow.extend(rest.tolist())
        parts[members] = q
        size[q] += len(members)
        psum[q] += X[members].sum(axis=0)

    for q, j in enumerate(nuclei):
        place(clusters[j], q)
    chosen = set(nuclei)
    for j, c in enumerate(clusters):
        if j in chosen:
            continue
        open_parts = np.flatnonzero(size < cap)
        ctrs = psum[open_parts] / size[open_parts, None]
        d = np.sum((ctrs - cent[j]) ** 2, axis=1)
        place(c, int(open_parts[int(np.argmin(d))]))
    for v in sorted(overflow):
        open_parts = np.flatnonzero(size < cap)
        ctrs = psum[open_parts] / np.maximum(size[open_parts, None], 1)
        d = np.sum((ctrs - X[v]) ** 2, axis=1)
        q = int(open_parts[int(np.argmin(d))])
        parts[v] = q
        size[q] += 1
        psum[q] += X[v]
    return Partitioning(parts)
