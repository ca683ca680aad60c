import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypercoarsen.coarsen import (
    ClusterAssignment,
    CoarsenConfig,
    ConfigError,
    balanced_assign,
    coarsen,
    contract,
    default_parts,
    part_capacity,
)
from hypercoarsen.embed import smooth_embed
from hypercoarsen.flow import hlc
from hypercoarsen.hypergraph import Hypergraph, cut, star_expand
from hypercoarsen.partition import Partitioning
from hypercoarsen.synthetic import planted_clusters, random_hypergraph, two_cliques

from oracles import hcut
from test_hypergraph import hypergraphs

H2 = Hypergraph(4, [[0, 1, 2], [2, 3]])


# --------------------------------------------------------------------------- config and assignment


@pytest.mark.parametrize(
    "kw", [{"rr": 0}, {"rr": 1}, {"k": 0}, {"iters": 0}, {"delta": 0}, {"epsilon": 0},
           {"max_iters": 0}, {"parts": 0}, {"threads": 0}, {"seed": -1}]
)
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        CoarsenConfig(**kw).validate()


def test_result_affecting_drops_threads():
    d = CoarsenConfig(threads=8).result_affecting()
    assert "threads" not in d and d["rr"] == 0.75


def test_default_parts():
    assert default_parts(100) == 1 and default_parts(12752) == 2 and default_parts(50000) == 10


def test_assignment_canonical_order_and_validation():
    a = ClusterAssignment.from_labels([5, 5, 1, 7])
    assert a.clusters == [(0, 1), (2,), (3,)]
    assert a.cluster_of.tolist() == [0, 0, 1, 2]
    with pytest.raises(ValueError):
        ClusterAssignment.from_clusters([[0, 1], [1, 2]], 3)
    with pytest.raises(ValueError):
        ClusterAssignment.from_clusters([[0]], 2)
    with pytest.raises(ValueError):
        ClusterAssignment.from_clusters([[0, 1], []], 2)


# --------------------------------------------------------------------------- contraction


def test_contract_direct_mapping():
    coarse, vmap = contract(H2, ClusterAssignment.from_clusters([[0, 1], [2], [3]], 4))
    assert coarse.pins == ((0, 1), (1, 2))
    assert vmap.tolist() == [0, 0, 1, 2]


def test_contract_collapsing_and_pruning():
    asg = ClusterAssignment.from_clusters([[0, 1, 2], [3]], 4)
    coarse, _ = contract(H2, asg)
    assert coarse.pins == ((0,), (0, 1))
    pruned, _ = contract(H2, asg, prune_singletons=True)
    assert pruned.pins == ((0, 1),)


def test_contract_dedup_merges_weights():
    h = Hypergraph(4, [[0, 2], [1, 3], [0, 1]])
    coarse, _ = contract(h, ClusterAssignment.from_clusters([[0, 1], [2, 3]], 4), dedup=True)
    assert coarse.pins == ((0, 1), (0,))
    assert coarse.hyperedge_weights.tolist() == [2, 1]


def test_identity_contraction_reproduces_input():
    h = Hypergraph(5, [[0, 4], [1, 2, 3], [3, 4]], [1, 2, 3], [1, 2, 3, 4, 5])
    coarse, vmap = contract(h, ClusterAssignment.from_labels(range(5)))
    assert coarse == h and vmap.tolist() == list(range(5))


def test_contract_rejects_partial_assignment():
    bad = ClusterAssignment(np.array([0, -1, 0, 0]), [(0, 2, 3)])
    with pytest.raises(ValueError):
        contract(H2, bad)


@settings(max_examples=60)
@given(hypergraphs(max_n=10, max_m=8, weighted=True), st.data())
def test_contraction_invariants(h, data):
    labels = data.draw(st.lists(st.integers(0, 4), min_size=h.n, max_size=h.n))
    asg = ClusterAssignment.from_labels(labels)
    coarse, vmap = contract(h, asg)
    # vertex weight conservation, hyperedge count preserved
    assert coarse.vertex_weights.sum() == h.vertex_weights.sum()
    assert coarse.m == h.m
    # cut projection identity for every coarse subset
    w = h.hyperedge_weights.tolist()
    for mask in range(1 << coarse.n):
        sc = [c for c in range(coarse.n) if mask >> c & 1]
        pre = [v for v in range(h.n) if vmap[v] in sc]
        assert cut(coarse, sc) == hcut(h.pins, pre, w)


# --------------------------------------------------------------------------- pipeline


def test_two_disjoint_hyperedges():
    h = Hypergraph(6, [[0, 1, 2], [3, 4, 5]])
    res = coarsen(h, CoarsenConfig(rr=2 / 3, delta=0.5))
    assert res.assignment.clusters == [(0, 1, 2), (3, 4, 5)]
    assert res.coarse.pins == ((0,), (1,))
    assert res.metrics["phi_avg"] == 0


def test_identity_limit():
    h = Hypergraph(6, [[0, 1, 2], [2, 3], [3, 4, 5]])
    res = coarsen(h, CoarsenConfig(rr=0.01, delta=1000.0))
    assert res.coarse.n == h.n and res.coarse == h


def test_empty_hypergraph_rejected():
    with pytest.raises(ConfigError):
        coarsen(Hypergraph(0, []))


@pytest.mark.parametrize("seed", range(4))
def test_pipeline_invariants(seed, backend):
    h, _ = planted_clusters(seed, n_clusters=3)
    res = coarsen(h, CoarsenConfig(seed=seed, parts=2))
    asg = res.assignment
    assert sorted(v for c in asg.clusters for v in c) == list(range(h.n))
    assert res.coarse.n == len(asg.clusters) and res.vertex_map.shape == (h.n,)
    assert res.coarse.m == h.m
    for j, p in enumerate(h.pins):
        assert res.coarse.pins[j] == tuple(sorted({int(res.vertex_map[v]) for v in p}))
    for c, val, sv, hist in zip(asg.clusters, asg.hlc, asg.seed_hlc, asg.history):
        assert val <= sv
        assert all(b <= a for a, b in zip(hist, hist[1:]))
    assert res.coarse.vertex_weights.sum() == h.vertex_weights.sum()


def test_reported_hlc_recomputes():
    h, _ = planted_clusters(5)
    res = coarsen(h, CoarsenConfig(seed=2))
    mean = np.mean([hlc(h, c, c, 0.5) for c in res.assignment.clusters])
    assert res.metrics["phi_avg"] == pytest.approx(mean, rel=1e-12)


def test_partition_file_backend(tmp_path):
    h, _ = planted_clusters(0)
    f = tmp_path / "parts.txt"
    f.write_text("".join(f"{v // 20}\n" for v in range(h.n)))
    res = coarsen(h, CoarsenConfig(partition_file=str(f)))
    assert res.partitioning.n_parts == 2
    for c in res.assignment.clusters:
        assert len({v // 20 for v in c}) == 1


@pytest.mark.parametrize("threads", [1, 2, 4])
def test_thread_count_does_not_change_result(threads):
    h = random_hypergraph(300, 200, seed=3, max_card=6)
    base = coarsen(h, CoarsenConfig(parts=4, threads=1, seed=9))
    other = coarsen(h, CoarsenConfig(parts=4, threads=threads, seed=9))
    assert base.assignment.clusters == other.assignment.clusters
    assert base.coarse == other.coarse


# --------------------------------------------------------------------------- balanced assignment


def test_part_capacity_example():
    assert part_capacity(1000, 4, 9) == 272


def test_capacity_respected_on_1000_vertices():
    h = random_hypergraph(1000, 700, seed=1, max_card=5)
    emb = smooth_embed(star_expand(h), 8, 10, 0)
    parts = balanced_assign(h, emb, 4, 9)
    sizes = np.bincount(parts.parts, minlength=4)
    assert sizes.sum() == 1000 and sizes.max() <= 272 and sizes.min() > 0


def test_identical_cliques_perfect_halves():
    h = two_cliques(6)
    emb = smooth_embed(star_expand(h), 8, 10, 0)
    parts = balanced_assign(h, emb, 2, 0)
    assert sorted(np.bincount(parts.parts).tolist()) == [6, 6]
    assert len(set(parts.parts[:6])) == 1


def test_nparts_equal_n_gives_singletons():
    h = two_cliques(3)
    emb = smooth_embed(star_expand(h), 3, 3, 0)
    assert sorted(balanced_assign(h, emb, 6, 5).parts.tolist()) == list(range(6))


def test_balanced_assign_errors():
    h = two_cliques(3)
    emb = smooth_embed(star_expand(h), 3, 3, 0)
    with pytest.raises(ValueError):
        balanced_assign(h, emb, 1, 5)
    with pytest.raises(ValueError):
        balanced_assign(h, emb, 7, 5)
    with pytest.raises(ValueError):
        balanced_assign(h, emb, 4, -1)
    with pytest.raises(ValueError):
        balanced_assign(Hypergraph(7, [range(7)]), smooth_embed(star_expand(Hypergraph(7, [range(7)])), 2, 2, 0), 3, 0)
