"""Hypergraph data model, hMETIS I/O, star/clique expansion and cut primitives."""
from __future__ import annotations

import io
import math
import os
from itertools import combinations
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class HypergraphError(ValueError):
    """Invalid hypergraph contents (bad pin, empty hyperedge, bad weight)."""


class HypergraphFormatError(HypergraphError):
    """Malformed hMETIS input."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Hypergraph:
    """Immutable weighted hypergraph.

    ``pins[e]`` is the sorted tuple of 0-based vertex ids of hyperedge ``e`` and
    ``incidence[v]`` the sorted tuple of hyperedges containing ``v``.  CSR views of
    both (``eptr``/``eind`` and ``vptr``/``vind``) are kept for the numeric kernels.
    """

    __slots__ = (
        "n", "m", "pins", "incidence", "vertex_weights", "hyperedge_weights",
        "degrees", "eptr", "eind", "vptr", "vind", "deg_list", "weight_list",
    )

    def __init__(
        self,
        n: int,
        pins: Iterable[Iterable[int]],
        hyperedge_weights: Sequence[float] | None = None,
        vertex_weights: Sequence[float] | None = None,
    ):
        n = int(n)
        if n < 0:
            raise HypergraphError(f"negative vertex count {n}")
        edges = []
        for e, members in enumerate(pins):
            members = tuple(sorted(int(v) for v in members))
            if not members:
                raise HypergraphError(f"hyperedge {e} is empty")
            if members[0] < 0 or members[-1] >= n:
                raise HypergraphError(f"hyperedge {e} has a pin outside [0, {n})")
            if any(a == b for a, b in zip(members, members[1:])):
                raise HypergraphError(f"hyperedge {e} has a duplicate pin")
            edges.append(members)
        m = len(edges)

        if hyperedge_weights is None:
            ew = np.ones(m)
        else:
            ew = np.array(hyperedge_weights, dtype=np.float64)
            if ew.shape != (m,):
                raise HypergraphError("hyperedge weight count does not match hyperedge count")
            if not np.all(ew > 0) or not np.all(np.isfinite(ew)):
                raise HypergraphError("hyperedge weights must be positive and finite")
        if vertex_weights is None:
            vw = np.ones(n)
        else:
            vw = np.array(vertex_weights, dtype=np.float64)
            if vw.shape != (n,):
                raise HypergraphError("vertex weight count does not match vertex count")
            if not np.all(vw >= 0) or not np.all(np.isfinite(vw)):
                raise HypergraphError("vertex weights must be nonnegative and finite")

        inc: list[list[int]] = [[] for _ in range(n)]
        for e, members in enumerate(edges):
            for v in members:
                inc[v].append(e)

        self.n = n
        self.m = m
        self.pins = tuple(edges)
        self.incidence = tuple(tuple(x) for x in inc)
        self.hyperedge_weights = _readonly(ew)
        self.vertex_weights = _readonly(vw)
        ewl = ew.tolist()
        self.weight_list = ewl
        self.deg_list = [math.fsum(ewl[e] for e in es) for es in inc]
        self.degrees = _readonly(np.array(self.deg_list, dtype=np.float64))

        sizes = np.fromiter((len(p) for p in edges), dtype=np.int64, count=m)
        self.eptr = _readonly(np.concatenate(([0], np.cumsum(sizes))).astype(np.int64))
        self.eind = _readonly(np.fromiter((v for p in edges for v in p), dtype=np.int64, count=int(self.eptr[-1])))
        vsizes = np.fromiter((len(x) for x in inc), dtype=np.int64, count=n)
        self.vptr = _readonly(np.concatenate(([0], np.cumsum(vsizes))).astype(np.int64))
        self.vind = _readonly(np.fromiter((e for x in inc for e in x), dtype=np.int64, count=int(self.vptr[-1])))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m}, pins={self.num_pins})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.pins == other.pins
            and np.array_equal(self.hyperedge_weights, other.hyperedge_weights)
            and np.array_equal(self.vertex_weights, other.vertex_weights)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def num_pins(self) -> int:
        return int(self.eptr[-1])

    @property
    def cardinalities(self) -> np.ndarray:
        return np.diff(self.eptr)

    def degree(self, v: int) -> float:
        return float(self.degrees[v])

    def has_unit_weights(self) -> bool:
        return bool(np.all(self.hyperedge_weights == 1.0) and np.all(self.vertex_weights == 1.0))

    def transpose_pins(self) -> tuple[tuple[int, ...], ...]:
        """Rebuild ``pins`` from ``incidence`` (inverse of the incidence construction)."""
        out: list[list[int]] = [[] for _ in range(self.m)]
        for v, es in enumerate(self.incidence):
            for e in es:
                out[e].append(v)
        return tuple(tuple(p) for p in out)

    def deduplicated(self) -> "Hypergraph":
        """Merge identical hyperedges, summing their weights (first occurrence keeps its slot)."""
        slot: dict[tuple[int, ...], int] = {}
        pins: list[tuple[int, ...]] = []
        weights: list[float] = []
        for p, w in zip(self.pins, self.hyperedge_weights.tolist()):
            j = slot.get(p)
            if j is None:
                slot[p] = len(pins)
                pins.append(p)
                weights.append(w)
            else:
                weights[j] += w
        return Hypergraph(self.n, pins, weights, self.vertex_weights)


class VertexSet:
    """A set of vertices of one hypergraph with its cached volume."""

    __slots__ = ("members", "volume")

    def __init__(self, h: Hypergraph, members: Iterable[int]):
        self.members = frozenset(int(v) for v in members)
        self.volume = volume(h, self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self.members)}, volume={self.volume})"


def _members(s) -> frozenset | set:
    if isinstance(s, VertexSet):
        return s.members
    if isinstance(s, (set, frozenset)):
        return s
    return set(int(v) for v in s)


def volume(h: Hypergraph, s: Iterable[int]) -> float:
    """Sum of vertex degrees over ``s``."""
    deg = h.deg_list
    return math.fsum(deg[v] for v in _members(s))


def cut(h: Hypergraph, s: Iterable[int] | VertexSet) -> float:
    """All-or-nothing cut: total weight of hyperedges with pins on both sides of ``s``."""
    inside = _members(s)
    if not inside or len(inside) == h.n:
        return 0.0
    w = h.weight_list
    seen = set()
    parts = []
    for v in inside:
        for e in h.incidence[v]:
            if e in seen:
                continue
            seen.add(e)
            for u in h.pins[e]:
                if u not in inside:
                    parts.append(w[e])
                    break
    return math.fsum(parts)


def conductance(h: Hypergraph, s: Iterable[int] | VertexSet) -> float:
    """``cut(S) / min(vol(S), vol(V \\ S))``; raises for trivial or zero-volume sides."""
    inside = _members(s)
    if not inside or len(inside) >= h.n:
        raise ValueError("conductance needs a nonempty proper subset of V")
    vs = volume(h, inside)
    total = math.fsum(h.deg_list)
    denom = min(vs, total - vs)
    if denom <= 0:
        raise ValueError("conductance undefined: a side has zero volume")
    return cut(h, inside) / denom


# --------------------------------------------------------------------------- I/O


def _num(tok: str, what: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise HypergraphFormatError(f"line {lineno}: bad {what} {tok!r}") from None
    return x


def parse_hmetis(source: str | bytes | IO) -> Hypergraph:
    """Parse hMETIS ``.hgr`` text: header ``m n [fmt]`` then 1-based pin lines.

    ``fmt`` 1 puts a hyperedge weight first on each pin line, 10 appends ``n``
    vertex-weight lines, 11 does both.  Lines starting with ``%`` are comments.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")

    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if not ln.startswith("%")]
    # trailing blank lines are not data
    while lines and not lines[-1][1]:
        lines.pop()
    # leading blank lines before the header are tolerated
    while lines and not lines[0][1]:
        lines.pop(0)
    if not lines:
        raise HypergraphFormatError("missing header")

    lineno, header = lines[0]
    toks = header.split()
    if len(toks) not in (2, 3):
        raise HypergraphFormatError(f"line {lineno}: header must be 'm n [fmt]'")
    try:
        m, n = int(toks[0]), int(toks[1])
        fmt = int(toks[2]) if len(toks) == 3 else 0
    except ValueError:
        raise HypergraphFormatError(f"line {lineno}: non-integer header field") from None
    if m < 0 or n < 0:
        raise HypergraphFormatError(f"line {lineno}: negative size in header")
    if fmt not in (0, 1, 10, 11):
        raise HypergraphFormatError(f"line {lineno}: unknown fmt {fmt}")
    has_ew = fmt in (1, 11)
    has_vw = fmt in (10, 11)

    body = lines[1:]
    if len(body) < m:
        raise HypergraphFormatError(f"expected {m} hyperedge lines, found {len(body)}")
    pins = []
    ew = []
    for lineno, ln in body[:m]:
        toks = ln.split()
        if not toks:
            raise HypergraphFormatError(f"line {lineno}: empty hyperedge line")
        if has_ew:
            w = _num(toks[0], "hyperedge weight", lineno)
            if not w > 0:
                raise HypergraphFormatError(f"line {lineno}: hyperedge weight must be positive")
            ew.append(w)
            toks = toks[1:]
            if not toks:
                raise HypergraphFormatError(f"line {lineno}: hyperedge has no pins")
        try:
            ids = [int(t) for t in toks]
        except ValueError:
            raise HypergraphFormatError(f"line {lineno}: non-integer pin id") from None
        for v in ids:
            if v < 1 or v > n:
                raise HypergraphFormatError(f"line {lineno}: pin id {v} out of range 1..{n}")
        if len(set(ids)) != len(ids):
            raise HypergraphFormatError(f"line {lineno}: duplicate pin within hyperedge")
        pins.append([v - 1 for v in ids])

    rest = body[m:]
    vw = None
    if has_vw:
        if len(rest) < n:
            raise HypergraphFormatError(f"expected {n} vertex weight lines, found {len(rest)}")
        vw = []
        for lineno, ln in rest[:n]:
            toks = ln.split()
            if len(toks) != 1:
                raise HypergraphFormatError(f"line {lineno}: expected one vertex weight")
            w = _num(toks[0], "vertex weight", lineno)
            if w < 0:
                raise HypergraphFormatError(f"line {lineno}: negative vertex weight")
            vw.append(w)
        rest = rest[n:]
    extra = [(i, ln) for i, ln in rest if ln]
    if extra:
        raise HypergraphFormatError(f"line {extra[0][0]}: unexpected trailing data")
    return Hypergraph(n, pins, ew if has_ew else None, vw)


def read_hmetis(path: str | os.PathLike) -> Hypergraph:
    with open(path, "rb") as f:
        return parse_hmetis(f.read())


def _fmt_weight(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_hmetis(h: Hypergraph, comment: str | None = None) -> str:
    has_ew = not np.all(h.hyperedge_weights == 1.0)
    has_vw = not np.all(h.vertex_weights == 1.0)
    fmt = (1 if has_ew else 0) + (10 if has_vw else 0)
    out = io.StringIO()
    if comment:
        for ln in comment.splitlines():
            out.write(f"% {ln}\n")
    out.write(f"{h.m} {h.n}" + (f" {fmt}" if fmt else "") + "\n")
    for p, w in zip(h.pins, h.hyperedge_weights.tolist()):
        ids = " ".join(str(v + 1) for v in p)
        out.write((f"{_fmt_weight(w)} {ids}" if has_ew else ids) + "\n")
    if has_vw:
        for w in h.vertex_weights.tolist():
            out.write(_fmt_weight(w) + "\n")
    return out.getvalue()


def write_hmetis(h: Hypergraph, dest: str | os.PathLike | IO, comment: str | None = None) -> None:
    text = format_hmetis(h, comment)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


# --------------------------------------------------------------------------- expansions


class BipartiteGraph:
    """Star expansion: vertices ``0..n-1`` on the left, one star node per hyperedge on the right.

    Star node ``j`` has global node id ``n + j`` in :meth:`adjacency`.
    """

    def __init__(self, h: Hypergraph):
        self.n_left = h.n
        self.n_right = h.m
        self._h = h
        star = np.repeat(np.arange(h.m, dtype=np.int64), np.diff(h.eptr))
        self.edges_vertex = _readonly(h.eind.copy())
        self.edges_star = _readonly(star)
        self.edges_weight = _readonly(h.hyperedge_weights[star].copy())
        N = h.n + h.m
        rows = np.concatenate((self.edges_vertex, star + h.n))
        cols = np.concatenate((star + h.n, self.edges_vertex))
        data = np.concatenate((self.edges_weight, self.edges_weight))
        adj = sp.csr_matrix((data, (rows, cols)), shape=(N, N))
        adj.sum_duplicates()
        adj.sort_indices()
        self._adj = adj

    @property
    def n_nodes(self) -> int:
        return self.n_left + self.n_right

    @property
    def n_edges(self) -> int:
        return int(self.edges_vertex.shape[0])

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.edges_vertex.tolist(), self.edges_star.tolist(), self.edges_weight.tolist()))

    def vertex_neighbors(self, v: int) -> tuple[int, ...]:
        """Star nodes (hyperedge ids) adjacent to vertex ``v``."""
        return self._h.incidence[v]

    def star_neighbors(self, j: int) -> tuple[int, ...]:
        return self._h.pins[j]

    def adjacency(self) -> sp.csr_matrix:
        return self._adj


def star_expand(h: Hypergraph) -> BipartiteGraph:
    return BipartiteGraph(h)


def clique_expand(h: Hypergraph, max_cardinality: int = 50) -> sp.csr_matrix:
    """Clique expansion with pair weight ``w(e) / (|e| - 1)``.

    Hyperedges larger than ``max_cardinality`` become star nodes appended after the
    ``n`` original vertices, so the matrix may be larger than ``n x n``.
    """
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    extra = 0
    for p, w in zip(h.pins, h.hyperedge_weights.tolist()):
        k = len(p)
        if k < 2:
            continue
        if k <= max_cardinality:
            pw = w / (k - 1)
            for a, b in combinations(p, 2):
                rows += (a, b)
                cols += (b, a)
                data += (pw, pw)
        else:
            c = h.n + extra
            extra += 1
            for a in p:
                rows += (a, c)
                cols += (c, a)
                data += (w, w)
    N = h.n + extra
    g = sp.csr_matrix((data, (rows, cols)), shape=(N, N), dtype=np.float64)
    g.sum_duplicates()
    g.sort_indices()
    return g
