"""Bundled brute-force self-check suite (run by ``hypercoarsen oracle``).

Three families of checks on tiny instances:

* flow duality: the max flow of the hyperedge-gadget network equals the exhaustive
  minimum of ``cut(S) + vol(R - S) + delta * vol(S - R)``, in exact integer
  arithmetic, for a sweep of ``delta``;
* the Cheeger sandwich ``w2 / 2 <= phi(G) <= sqrt(2 * w2)`` on small graphs;
* the cut projection identity of contraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coarsen import ClusterAssignment, contract
from .flow import LocalHypergraph, build_flow_network, max_flow
from .hypergraph import Hypergraph, clique_expand, cut
from .metrics import brute_force_graph_conductance, brute_force_st_cut, dense_spectrum
from .synthetic import random_hypergraph

DELTAS = (0.1, 0.5, 1.0)
CAPACITY_SCALE = 10


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def bundled_instances() -> list[Hypergraph]:
    """Fixed 8-vertex hypergraphs: two fixtures plus seeded random ones."""
    out = [
        Hypergraph(8, [[0, 1, 2, 3], [2, 3], [3, 4], [4, 5, 6, 7], [6, 7], [0, 7]]),
        Hypergraph(8, [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 7], [0, 4, 7]]),
    ]
    out += [random_hypergraph(8, 6, seed=s, max_card=4) for s in range(6)]
    return out


def _seed_sets(n: int, rng: np.random.Generator, count: int = 3):
    for _ in range(count):
        k = int(rng.integers(1, max(2, n // 2) + 1))
        yield sorted(rng.choice(n, size=k, replace=False).tolist())


def check_flow_duality(instances, deltas=DELTAS, corrupt_capacities: bool = False) -> list[Check]:
    rng = np.random.default_rng(0)
    out = []
    for i, h in enumerate(instances):
        for r in _seed_sets(h.n, rng):
            for delta in deltas:
                hl = LocalHypergraph(h, range(h.n))
                net = build_flow_network(hl, r, delta, capacity_scale=CAPACITY_SCALE)
                if corrupt_capacities:
                    # test hook: double every hyperedge gadget capacity
                    nv = len(net.vertices)
                    gadget = (net.tail >= 2 + nv) & (net.cap < net.inf)
                    net.cap = net.cap.copy()
                    net.cap[gadget] *= 2
                flow = max_flow(net).value
                want, _ = brute_force_st_cut(h, range(h.n), r, delta, scale=CAPACITY_SCALE)
                out.append(Check(f"flow[{i}] R={r} delta={delta}", flow == want, f"flow={flow} brute={want}"))
    return out


def check_cheeger(instances) -> list[Check]:
    out = []
    for i, h in enumerate(instances):
        a = clique_expand(h)
        deg = np.asarray(a.sum(axis=1)).ravel()
        if np.any(deg <= 0):
            continue
        w, _ = dense_spectrum(a)
        phi = brute_force_graph_conductance(a)
        lo, hi = w[1] / 2.0, math.sqrt(max(2.0 * w[1], 0.0))
        ok = lo - 1e-6 <= phi <= hi + 1e-6
        out.append(Check(f"cheeger[{i}]", ok, f"{lo:.6g} <= {phi:.6g} <= {hi:.6g}"))
    return out


def check_cut_projection(instances) -> list[Check]:
    rng = np.random.default_rng(1)
    out = []
    for i, h in enumerate(instances):
        labels = rng.integers(0, max(1, h.n // 2), size=h.n)
        asg = ClusterAssignment.from_labels(labels)
        coarse, vmap = contract(h, asg)
        bad = 0
        for mask in range(1, 1 << coarse.n):
            sc = [c for c in range(coarse.n) if (mask >> c) & 1]
            pre = np.flatnonzero(np.isin(vmap, sc)).tolist()
            if cut(coarse, sc) != cut(h, pre):
                bad += 1
        out.append(Check(f"projection[{i}]", bad == 0, f"{bad} mismatching subsets"))
    return out


def run_suite(deltas=DELTAS, corrupt_capacities: bool = False) -> list[Check]:
    inst = bundled_instances()
    return (
        check_flow_duality(inst, deltas, corrupt_capacities)
        + check_cheeger(inst)
        + check_cut_projection(inst)
    )
