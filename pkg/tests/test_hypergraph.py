import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypercoarsen.hypergraph import (
    Hypergraph,
    HypergraphError,
    HypergraphFormatError,
    VertexSet,
    clique_expand,
    conductance,
    cut,
    format_hmetis,
    parse_hmetis,
    read_hmetis,
    star_expand,
    volume,
    write_hmetis,
)

from oracles import degrees, hcut


@st.composite
def hypergraphs(draw, max_n=10, max_m=8, weighted=False):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    pins = [draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n)) for _ in range(m)]
    w = [draw(st.integers(1, 5)) for _ in range(m)] if weighted else None
    return Hypergraph(n, pins, w)


H2 = Hypergraph(4, [[0, 1, 2], [2, 3]])


def test_degrees_hand_example():
    assert H2.degrees.tolist() == [1, 1, 2, 1]
    assert volume(H2, [0, 1]) == 2
    assert cut(H2, [0, 1]) == 1
    assert cut(H2, [2, 3]) == 1
    assert cut(H2, []) == 0 and cut(H2, range(4)) == 0


def test_conductance_hand_example():
    assert conductance(H2, [0, 1]) == pytest.approx(0.5)
    assert conductance(H2, [3]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        conductance(H2, [])
    with pytest.raises(ValueError):
        conductance(H2, range(4))


def test_vertex_set_volume():
    s = VertexSet(H2, [0, 2])
    assert s.volume == 3 and len(s) == 2 and 2 in s


@pytest.mark.parametrize("pins", [[[]], [[0, 0]], [[5]], [[-1]]])
def test_invalid_pins_rejected(pins):
    with pytest.raises(HypergraphError):
        Hypergraph(3, pins)


def test_invalid_weights_rejected():
    with pytest.raises(HypergraphError):
        Hypergraph(2, [[0, 1]], [0])
    with pytest.raises(HypergraphError):
        Hypergraph(2, [[0, 1]], [math.inf])
    with pytest.raises(HypergraphError):
        Hypergraph(2, [[0, 1]], vertex_weights=[1, -1])


def test_arrays_are_read_only():
    with pytest.raises(ValueError):
        H2.degrees[0] = 5


@given(hypergraphs(weighted=True))
def test_handshake(h):
    assert math.isclose(h.degrees.sum(), float(np.dot(h.cardinalities, h.hyperedge_weights)))


@given(hypergraphs(weighted=True), st.data())
def test_cut_complement_symmetry_and_oracle(h, data):
    s = data.draw(st.sets(st.integers(0, h.n - 1)))
    comp = set(range(h.n)) - s
    w = h.hyperedge_weights.tolist()
    assert cut(h, s) == cut(h, comp) == hcut(h.pins, s, w)


@given(hypergraphs(weighted=True))
def test_incidence_is_transpose(h):
    assert h.transpose_pins() == h.pins
    assert h.degrees.tolist() == degrees(h.n, h.pins, h.hyperedge_weights.tolist())


# --------------------------------------------------------------------------- hMETIS I/O


def test_parse_unweighted():
    h = parse_hmetis("% comment\n2 4\n1 2 3\n3 4\n")
    assert h == H2


def test_parse_weighted_fmt11():
    h = parse_hmetis("2 3 11\n2 1 2\n5 2 3\n1\n2\n3\n")
    assert h.hyperedge_weights.tolist() == [2, 5]
    assert h.vertex_weights.tolist() == [1, 2, 3]
    assert h.degrees.tolist() == [2, 7, 5]


def test_parse_fmt10_vertex_weights_only():
    h = parse_hmetis("1 2 10\n1 2\n4\n0\n")
    assert h.vertex_weights.tolist() == [4, 0]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2 4\n1 2 3\n",
        "1 4\n1 5\n",
        "1 4\n0 1\n",
        "1 4\n1 1\n",
        "1 4 1\n0 1 2\n",
        "1 4 7\n1 2\n",
        "1 4\n1 2\n9 9\n",
        "1 4\n\n",
        "x 4\n1\n",
        "1 4\n1 a\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(HypergraphFormatError):
        parse_hmetis(text)


def test_parse_tolerates_trailing_blank_lines():
    assert parse_hmetis("2 4\n1 2 3\n3 4\n\n\n") == H2


@given(hypergraphs(weighted=True))
def test_roundtrip(h):
    assert parse_hmetis(format_hmetis(h, "a comment")) == h


def test_file_roundtrip(tmp_path):
    p = tmp_path / "x.hgr"
    write_hmetis(H2, p, comment="hello")
    assert p.read_text().startswith("% hello\n2 4\n")
    assert read_hmetis(p) == H2
    buf = io.StringIO()
    write_hmetis(H2, buf)
    assert buf.getvalue() == "2 4\n1 2 3\n3 4\n"


# --------------------------------------------------------------------------- expansions


def test_star_expand_structure():
    g = star_expand(H2)
    assert (g.n_left, g.n_right, g.n_nodes, g.n_edges) == (4, 2, 6, 5)
    a = g.adjacency().toarray()
    assert np.array_equal(a, a.T)
    assert a[0, 4] == 1 and a[3, 5] == 1 and a[3, 4] == 0
    assert g.vertex_neighbors(2) == (0, 1)
    assert g.star_neighbors(1) == (2, 3)


@given(hypergraphs(weighted=True))
def test_star_expansion_preserves_degrees(h):
    a = star_expand(h).adjacency()
    deg = np.asarray(a.sum(axis=1)).ravel()
    assert np.allclose(deg[: h.n], h.degrees)
    assert np.allclose(deg[h.n:], h.hyperedge_weights * h.cardinalities)


def test_clique_expand_weights():
    g = clique_expand(H2).toarray()
    assert g[0, 1] == pytest.approx(0.5) and g[2, 3] == pytest.approx(1.0)
    assert np.allclose(g.sum(axis=1), [1, 1, 2, 1])


def test_clique_expand_large_hyperedge_becomes_star():
    h = Hypergraph(5, [list(range(5)), [0, 1]])
    g = clique_expand(h, max_cardinality=3)
    assert g.shape == (6, 6)
    assert g[5, :5].toarray().ravel().tolist() == [1, 1, 1, 1, 1]
    assert g[0, 1] == 1


@given(hypergraphs(weighted=True))
def test_clique_expansion_preserves_degree_of_non_singletons(h):
    g = clique_expand(h)
    deg = np.asarray(g.sum(axis=1)).ravel()[: h.n]
    expect = degrees(h.n, [p for p in h.pins if len(p) > 1],
                     [w for p, w in zip(h.pins, h.hyperedge_weights.tolist()) if len(p) > 1])
    assert np.allclose(deg, expect)


def test_deduplicated_sums_weights():
    h = Hypergraph(3, [[0, 1], [1, 2], [1, 0]], [1, 2, 3])
    d = h.deduplicated()
    assert d.pins == ((0, 1), (1, 2))
    assert d.hyperedge_weights.tolist() == [4, 2]
