import math
from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from hypercoarsen.coarsen import ClusterAssignment, CoarsenConfig, coarsen, contract
from hypercoarsen.hypergraph import Hypergraph, clique_expand
from hypercoarsen.metrics import (
    average_local_conductance,
    brute_force_graph_conductance,
    brute_force_min_hlc,
    brute_force_st_cut,
    cut_preservation,
    dense_spectrum,
    file_bisector,
    jacobi_eigh,
    kway_conductance,
    local_conductance_report,
    write_cluster_csv,
)
from hypercoarsen.partition import Partitioning
from hypercoarsen.synthetic import planted_clusters

from oracles import graph_conductance, hcut, hlc_exact, min_st_cut_objective, normalized_laplacian_eigs, subsets
from test_hypergraph import hypergraphs

H2 = Hypergraph(4, [[0, 1, 2], [2, 3]])


def two_cliques_bridge(k=4):
    pins = [list(range(k)), list(range(k, 2 * k)), [k - 1, k]]
    return Hypergraph(2 * k, pins)


# --------------------------------------------------------------------------- average local conductance


def test_phi_zero_for_disjoint_full_clusters():
    h = Hypergraph(6, [[0, 1, 2], [3, 4, 5]])
    assert average_local_conductance(h, [(0, 1, 2), (3, 4, 5)]) == 0


def test_phi_hand_example():
    rep = local_conductance_report(H2, [(0, 1), (2, 3)], 0.5)
    assert rep["per_cluster"] == pytest.approx([1 / 2, 1 / 3])
    assert rep["phi_avg"] == pytest.approx(5 / 12)
    assert rep["delta"] == 0.5


def test_zero_volume_clusters_excluded():
    h = Hypergraph(3, [[0, 1]])
    rep = local_conductance_report(h, [(0, 1), (2,)])
    assert rep["excluded"] == 1 and rep["phi_avg"] == 0 and rep["per_cluster"][1] is None


def test_phi_requires_clusters():
    with pytest.raises(ValueError):
        average_local_conductance(H2, [])


@settings(max_examples=40)
@given(hypergraphs(max_n=9, max_m=7), st.data())
def test_phi_equals_mean_of_recomputed_hlc(h, data):
    labels = data.draw(st.lists(st.integers(0, 3), min_size=h.n, max_size=h.n))
    asg = ClusterAssignment.from_labels(labels)
    vals = [hlc_exact(h.n, h.pins, c, c, 1) for c in asg.clusters]
    vals = [float(v) for v in vals if v is not None]
    got = average_local_conductance(h, asg)
    if vals:
        assert got == pytest.approx(sum(vals) / len(vals), rel=1e-12, abs=1e-15)
    else:
        assert math.isnan(got)


def test_cluster_csv(tmp_path):
    p = tmp_path / "c.csv"
    write_cluster_csv(p, [(0, 1), (2,)], [0.5, None])
    assert p.read_text() == "cluster,size,hlc\n0,2,0.5\n1,1,\n"


# --------------------------------------------------------------------------- k-way conductance


def test_kway_disjoint_components():
    h = Hypergraph(4, [[0, 1], [2, 3]])
    assert kway_conductance(h, Partitioning(np.array([0, 0, 1, 1]))) == 0


def test_kway_hand_example():
    assert kway_conductance(H2, np.array([0, 0, 1, 1])) == pytest.approx(0.5)


def test_kway_planted_matches_brute_force():
    h, labels = planted_clusters(2, size=5, n_clusters=4, internal=6)
    got = kway_conductance(h, labels)
    best = 0.0
    for q in range(4):
        s = set(np.flatnonzero(labels == q).tolist())
        d = h.degrees
        vol = d[list(s)].sum()
        best = max(best, hcut(h.pins, s) / min(vol, d.sum() - vol))
    assert got == pytest.approx(best)


def test_kway_errors():
    with pytest.raises(ValueError):
        kway_conductance(H2, np.zeros(4, dtype=int))
    with pytest.raises(ValueError):
        kway_conductance(Hypergraph(3, [[0, 1]]), np.array([0, 0, 1]))


# --------------------------------------------------------------------------- cut preservation


def test_identity_coarsening_has_zero_difference():
    h, _ = planted_clusters(1)
    coarse, vmap = contract(h, ClusterAssignment.from_labels(range(h.n)))

    before, after, rel = cut_preservation(h, SimpleNamespace(coarse=coarse, vertex_map=vmap))
    assert before == after and rel == 0


def test_cliques_coarsened_to_single_vertices(tmp_path):
    h = two_cliques_bridge()
    res = coarsen(h, CoarsenConfig(rr=0.75))
    assert res.coarse.n == 2
    before, after, rel = cut_preservation(h, res)
    assert before == after == 1 and rel == 0


def test_file_bisector_and_degenerate_bisection(tmp_path):
    h = two_cliques_bridge()
    res = coarsen(h, CoarsenConfig(rr=0.75))
    with pytest.raises(ValueError):
        cut_preservation(h, res, lambda g: np.zeros(g.n, dtype=int))
    f = tmp_path / "b.txt"
    f.write_text("0\n0\n0\n0\n1\n1\n1\n1\n")
    bis = file_bisector(f)
    assert bis(h).tolist() == [0, 0, 0, 0, 1, 1, 1, 1]


# --------------------------------------------------------------------------- brute-force oracles


def test_brute_force_min_hlc_examples():
    two = Hypergraph(6, [[0, 1, 2], [3, 4, 5]])
    assert brute_force_min_hlc(two, {0, 1}, 0.5) == (frozenset({0, 1, 2}), 0.0)
    assert brute_force_min_hlc(two, {3, 4, 5}, 0.5)[1] == 0
    s, _ = brute_force_min_hlc(H2, {0, 1}, 1e6)
    assert s <= {0, 1}


def test_brute_force_limits():
    with pytest.raises(ValueError):
        brute_force_min_hlc(Hypergraph(21, []), {0}, 0.5)
    with pytest.raises(ValueError):
        brute_force_min_hlc(H2, set(), 0.5)


@settings(max_examples=60)
@given(hypergraphs(max_n=7, max_m=5), st.data(), st.sampled_from([1, 5, 10]))
def test_brute_force_min_hlc_matches_exact_enumeration(h, data, d10):
    r = data.draw(st.sets(st.integers(0, h.n - 1), min_size=1))
    _, val = brute_force_min_hlc(h, r, d10 / 10)
    exact = [hlc_exact(h.n, h.pins, s, r, Fraction(d10, 10)) for s in subsets(range(h.n))]
    exact = [x for x in exact if x is not None]
    if not exact:
        assert val == math.inf
    else:
        assert val == pytest.approx(float(min(exact)), rel=1e-12)


@settings(max_examples=60)
@given(hypergraphs(max_n=7, max_m=5), st.data(), st.sampled_from([1, 5, 10]))
def test_brute_force_st_cut_matches_oracle(h, data, d10):
    r = data.draw(st.sets(st.integers(0, h.n - 1), min_size=1))
    within = sorted(r | data.draw(st.sets(st.integers(0, h.n - 1))))
    val, s = brute_force_st_cut(h, within, r, d10 / 10, scale=10)
    assert Fraction(val, 10) == min_st_cut_objective(h.n, h.pins, r, Fraction(d10, 10), within=within)
    assert s <= set(within)


# --------------------------------------------------------------------------- spectra


def test_jacobi_matches_numpy():
    A = np.random.default_rng(0).normal(size=(12, 12))
    A = A + A.T
    w, V = jacobi_eigh(A)
    assert np.allclose(w, np.linalg.eigvalsh(A), atol=1e-10)
    assert np.allclose(V.T @ V, np.eye(12), atol=1e-10)
    assert np.allclose(A @ V, V * w, atol=1e-9)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_k2_spectrum():
    w, _ = dense_spectrum(sp.csr_matrix([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [0, 2], atol=1e-8)


def test_disconnected_graph_second_eigenvalue_zero():
    A = np.zeros((4, 4))
    A[0, 1] = A[1, 0] = A[2, 3] = A[3, 2] = 1
    w, _ = dense_spectrum(A)
    assert np.allclose(w, [0, 0], atol=1e-8)


def test_p3_spectrum_closed_form():
    # normalized Laplacian of P3 = [[1,-a,0],[-a,1,-a],[0,-a,1]], a = 1/sqrt(2);
    # characteristic polynomial (1-x)((1-x)^2 - 2a^2) has roots 0, 1, 2
    A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    w, V = dense_spectrum(A)
    assert np.allclose(w, [0, 1], atol=1e-8)
    assert np.allclose(np.abs(V[:, 0]), np.sqrt([1, 2, 1]) / 2, atol=1e-8)


def test_dense_spectrum_errors():
    with pytest.raises(ValueError):
        dense_spectrum(sp.csr_matrix((2001, 2001)))
    with pytest.raises(ValueError):
        dense_spectrum(np.zeros((3, 3)))


@settings(max_examples=25)
@given(st.integers(3, 10), st.integers(0, 10**6))
def test_dense_spectrum_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = np.triu(rng.random((n, n)) < 0.5, 1) * rng.integers(1, 4, size=(n, n))
    A = A + A.T
    A[np.arange(n - 1), np.arange(1, n)] += 1
    A[np.arange(1, n), np.arange(n - 1)] += 1
    w, V = dense_spectrum(A.astype(float))
    ref, _ = normalized_laplacian_eigs(A)
    assert np.allclose(w, ref[:2], atol=1e-8)


@settings(max_examples=25)
@given(st.integers(2, 9), st.integers(0, 10**6))
def test_graph_conductance_matches_oracle(n, seed):
    rng = np.random.default_rng(seed)
    A = np.triu(rng.random((n, n)) < 0.6, 1).astype(float)
    A = A + A.T
    A[np.arange(n - 1), np.arange(1, n)] = 1
    A[np.arange(1, n), np.arange(n - 1)] = 1
    assert brute_force_graph_conductance(A) == pytest.approx(graph_conductance(A))


def test_cheeger_sandwich_on_clique_expansion():
    h, _ = planted_clusters(0, size=6, internal=8)
    a = clique_expand(h)
    w, _ = dense_spectrum(a)
    phi = brute_force_graph_conductance(a)
    assert w[1] / 2 - 1e-6 <= phi <= math.sqrt(2 * w[1]) + 1e-6
