import numpy as np
import pytest

from hypercoarsen.hypergraph import cut, volume
from hypercoarsen.synthetic import (
    geometric_hypergraph,
    path_graph,
    planted_clusters,
    random_hypergraph,
    two_cliques,
    vlsi_like,
)

GENERATORS = [
    lambda s: random_hypergraph(30, 20, seed=s, max_card=6, weighted=True),
    lambda s: planted_clusters(s, n_clusters=3)[0],
    lambda s: geometric_hypergraph(200, seed=s),
    lambda s: vlsi_like(500, seed=s),
]


@pytest.mark.parametrize("gen", GENERATORS)
def test_generators_are_seeded(gen):
    a, b, c = gen(1), gen(1), gen(2)
    assert a.pins == b.pins and np.array_equal(a.hyperedge_weights, b.hyperedge_weights)
    assert a.pins != c.pins


def test_planted_structure():
    h, labels = planted_clusters(3, size=20, n_clusters=2, max_bridges=2)
    left = np.flatnonzero(labels == 0).tolist()
    assert h.n == 40 and 1 <= cut(h, left) <= 2
    assert list(range(20)) in [list(p) for p in h.pins]


def test_vlsi_like_shape():
    h = vlsi_like(3000, seed=0)
    sizes = np.array([len(p) for p in h.pins])
    assert sizes.min() >= 2 and sizes.max() <= 200
    assert np.mean(sizes <= 3) > 0.6
    assert np.all(np.asarray(h.degrees) > 0)


def test_geometric_every_vertex_has_a_net():
    h = geometric_hypergraph(400, seed=0)
    assert h.m == 400 and np.all(np.asarray(h.degrees) > 0)


def test_small_families():
    assert cut(two_cliques(4), range(4)) == 1 and cut(two_cliques(4, bridge=False), range(4)) == 0
    p = path_graph(5)
    assert p.m == 4 and volume(p, range(5)) == 8
