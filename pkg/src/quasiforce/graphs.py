"""Labeled simple graphs, the pendant/doubling constructions and (n, m, b)."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

import networkx as nx
import numpy as np

from quasiforce.elimination import max_plus

EXHAUSTIVE_MAX_CUT_LIMIT = 30


class GraphError(ValueError):
    """Raised for malformed graphs or violated construction hypotheses."""


@dataclass(frozen=True)
class LabeledGraph:
    """A finite simple graph on vertices ``0..vertex_count-1``.

    ``labels`` is stored as sorted ``(label, vertex)`` pairs.  ``recipe``
    records how the graph was built (``("pendant", F, k)`` or
    ``("double", F, I)``) so counting can follow the construction; it takes
    no part in equality.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[tuple[int, int], ...] = ()
    recipe: tuple[Any, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise GraphError(f"negative vertex count {self.vertex_count}")
        seen = set()
        for u, v in self.edges:
            for x in (u, v):
                if not 0 <= x < self.vertex_count:
                    raise GraphError(f"edge ({u}, {v}): vertex {x} out of range")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        owners: dict[int, int] = {}
        for label, vertex in self.labels:
            if label < 0:
                raise GraphError(f"negative label {label}")
            if not 0 <= vertex < self.vertex_count:
                raise GraphError(f"label {label}: vertex {vertex} out of range")
            if label in owners:
                raise GraphError(f"label {label} assigned twice")
            if vertex in owners.values():
                raise GraphError(f"vertex {vertex} carries two labels")
            owners[label] = vertex

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def label_map(self) -> dict[int, int]:
        """label -> vertex"""
        return dict(self.labels)

    def vertex_of(self, label: int) -> int:
        for lab, v in self.labels:
            if lab == label:
                return v
        raise GraphError(f"label {label} not present")

    def has_label(self, label: int) -> bool:
        return any(lab == label for lab, _ in self.labels)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.adjacency()]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    def unlabeled(self) -> LabeledGraph:
        return LabeledGraph(self.vertex_count, self.edges)


def _make(
    vertex_count: int,
    edges: Iterable[tuple[int, int]],
    labels: Mapping[int, int] | None = None,
    recipe: tuple[Any, ...] | None = None,
) -> LabeledGraph:
    # labels here are label -> vertex
    norm = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    labs = tuple(sorted((labels or {}).items()))
    return LabeledGraph(vertex_count, norm, labs, recipe)


def build_graph(
    vertex_count: int,
    edge_list: Iterable[tuple[int, int]],
    label_assignments: Mapping[int, int] | None = None,
) -> LabeledGraph:
    """Validated graph from an edge list and a ``{vertex: label}`` map."""
    by_label: dict[int, int] = {}
    for vertex, label in (label_assignments or {}).items():
        if label in by_label:
            raise GraphError(f"label {label} assigned twice")
        by_label[label] = vertex
    return _make(vertex_count, [tuple(e) for e in edge_list], by_label)


def from_networkx(g: nx.Graph, labels: Mapping[int, int] | None = None) -> LabeledGraph:
    """Relabel ``g``'s nodes to 0..n-1 in sorted order; ``labels`` is label -> original node."""
    nodes = sorted(g.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    edges = [(index[u], index[v]) for u, v in g.edges()]
    labs = {lab: index[v] for lab, v in (labels or {}).items()}
    return _make(len(nodes), edges, labs)


def pendant(F: LabeledGraph, k: int) -> LabeledGraph:
    """F^(k): k new leaves labeled 1..k attached to the 0-labeled vertex."""
    if k < 1:
        raise GraphError(f"pendant count must be positive, got {k}")
    if not F.has_label(0):
        raise GraphError("pendant requires a vertex labeled 0")
    root = F.vertex_of(0)
    n = F.vertex_count
    labels = {lab: v for lab, v in F.labels if not 1 <= lab <= k}
    edges = list(F.edges)
    for i in range(1, k + 1):
        edges.append((root, n + i - 1))
        labels[i] = n + i - 1
    return _make(n + k, edges, labels, ("pendant", F, k))


def double(F: LabeledGraph, I: Iterable[int]) -> LabeledGraph:
    """db_I(F): two copies of F glued along the vertices labeled in I.

    Only the I labels survive; the second copy's other vertices are numbered
    after the first copy's.
    """
    I = tuple(sorted(set(I)))
    lm = F.label_map
    missing = [lab for lab in I if lab not in lm]
    if missing:
        raise GraphError(f"labels {missing} absent from graph")
    glued = {lm[lab] for lab in I}
    n = F.vertex_count
    image = {}
    nxt = n
    for v in range(n):
        if v in glued:
            image[v] = v
        else:
            image[v] = nxt
            nxt += 1
    edges = set(F.edges)
    for u, v in F.edges:
        a, b = image[u], image[v]
        edges.add((min(a, b), max(a, b)))
    return _make(nxt, edges, {lab: lm[lab] for lab in I}, ("double", F, I))


def standard_graph(kind: str, size: int = 1) -> LabeledGraph:
    """Canonically labeled small graphs.

    ``vertex`` (v, label 0), ``isolated_pair`` (two isolated vertices labeled
    1 and 2), ``edge`` (labels 0, 1), ``cycle`` (C_size, vertex 0 labeled 0)
    and ``complete`` (K_size, vertex 0 labeled 0).
    """
    if size < 1:
        raise GraphError(f"size must be at least 1, got {size}")
    if kind == "vertex":
        if size != 1:
            raise GraphError("vertex has size 1")
        return _make(1, [], {0: 0})
    if kind == "isolated_pair":
        if size != 2:
            raise GraphError("isolated_pair has size 2")
        return _make(2, [], {1: 0, 2: 1})
    if kind == "edge":
        if size != 2:
            raise GraphError("edge has size 2")
        return _make(2, [(0, 1)], {0: 0, 1: 1})
    if kind == "cycle":
        if size < 3:
            raise GraphError(f"cycle needs at least 3 vertices, got {size}")
        return _make(size, [(i, (i + 1) % size) for i in range(size)], {0: 0})
    if kind == "complete":
        return _make(size, combinations(range(size), 2), {0: 0})
    raise GraphError(f"unknown graph kind {kind!r}")


def is_connected(F: LabeledGraph) -> bool:
    return F.vertex_count > 0 and nx.is_connected(F.to_networkx())


def is_bipartite(F: LabeledGraph) -> bool:
    return nx.is_bipartite(F.to_networkx())


def max_cut_exhaustive(F: LabeledGraph) -> int:
    """Max-cut by enumerating all 2^(n-1) bipartitions (vertex n-1 fixed)."""
    n = F.vertex_count
    if n > EXHAUSTIVE_MAX_CUT_LIMIT:
        raise GraphError(f"exhaustive max-cut limited to n <= {EXHAUSTIVE_MAX_CUT_LIMIT}, got {n}")
    if n <= 1 or not F.edges:
        return 0
    total = 1 << (n - 1)
    best = 0
    chunk = 1 << 18
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cut = np.zeros(len(masks), dtype=np.int32)
        for u, v in F.edges:
            cut += ((masks >> u) ^ (masks >> v)) & 1
        best = max(best, int(cut.max()))
    return best


def max_cut_elimination(F: LabeledGraph) -> int:
    """Exact max-cut by max-plus variable elimination; cost 2^width."""
    crossing = np.array([[0, 1], [1, 0]], dtype=np.int64)
    return max_plus(range(F.vertex_count), [((u, v), crossing) for u, v in F.edges], 2)


def max_cut(F: LabeledGraph, method: str = "auto") -> int:
    if method == "exhaustive" or (method == "auto" and F.vertex_count <= 16):
        return max_cut_exhaustive(F)
    if method in ("auto", "elimination"):
        return max_cut_elimination(F)
    raise GraphError(f"unknown max-cut method {method!r}")


@dataclass(frozen=True)
class GraphParams:
    n: int
    m: int
    b: int
    g1: Fraction | None
    g2: Fraction | None
    connected: bool
    bipartite: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "b": self.b,
            "g1": None if self.g1 is None else str(self.g1),
            "g2": None if self.g2 is None else str(self.g2),
            "connected": self.connected,
            "bipartite": self.bipartite,
        }


def graph_params(F: LabeledGraph, method: str = "auto") -> GraphParams:
    n, m = F.vertex_count, F.m
    b = max_cut(F, method)
    return GraphParams(
        n=n,
        m=m,
        b=b,
        g1=Fraction(n - 1, m) if m else None,
        g2=Fraction(b, m) if m else None,
        connected=is_connected(F),
        bipartite=is_bipartite(F),
    )


FAMILIES = ("H1", "H2", "H3")


@dataclass(frozen=True)
class TripleFamily:
    family_id: str
    seed: LabeledGraph
    members: tuple[LabeledGraph, LabeledGraph, LabeledGraph]
    names: tuple[str, str, str]


def check_seed(T: LabeledGraph) -> None:
    if not T.has_label(0):
        raise GraphError("seed graph T needs a vertex labeled 0")
    if not is_connected(T):
        raise GraphError("seed graph T must be connected")
    if is_bipartite(T):
        raise GraphError("seed graph T must be non-bipartite")


def seed_graph(T: LabeledGraph) -> LabeledGraph:
    """T with every label except 0 dropped and no recipe: the base of all constructions."""
    check_seed(T)
    return LabeledGraph(T.vertex_count, T.edges, ((0, T.vertex_of(0)),))


def construction_graphs(T: LabeledGraph) -> dict[str, LabeledGraph]:
    """The seven graphs of the parameter table, keyed by display name."""
    T = seed_graph(T)
    N = T.vertex_count
    e = standard_graph("edge", 2)
    Tp = pendant(T, 1)
    return {
        "e": e,
        "C_2N": standard_graph("cycle", 2 * N),
        "T": T,
        "T'": Tp,
        "db_{0,1}(T')": double(Tp, (0, 1)),
        "db_{1,2}(db_0(T^(N))'')": double(pendant(double(pendant(T, N), (0,)), 2), (1, 2)),
        "db_{1,2}(db_0^2(T)'')": double(pendant(double(double(T, (0,)), (0,)), 2), (1, 2)),
    }


TRIPLE_MEMBERS = {
    "H1": ("T'", "db_{0,1}(T')", "C_2N"),
    "H2": ("e", "T'", "db_{1,2}(db_0^2(T)'')"),
    "H3": ("T", "T'", "db_{1,2}(db_0(T^(N))'')"),
}


def closed_form_nmb(name: str, N: int, M: int, B: int) -> tuple[int, int, int]:
    """(n, m, b) of a table graph as a function of T's (N, M, B)."""
    return {
        "e": (2, 1, 1),
        "C_2N": (2 * N, 2 * N, 2 * N),
        "T": (N, M, B),
        "T'": (N + 1, M + 1, B + 1),
        "db_{0,1}(T')": (2 * N, 2 * M + 1, 2 * B + 1),
        "db_{1,2}(db_0(T^(N))'')": (8 * N, 4 * M + 4 + 4 * N, 4 * B + 4 + 4 * N),
        "db_{1,2}(db_0^2(T)'')": (8 * N - 4, 8 * M + 4, 8 * B + 4),
    }[name]


def construct_triple(family_id: str, T: LabeledGraph) -> TripleFamily:
    if family_id not in TRIPLE_MEMBERS:
        raise GraphError(f"unknown family {family_id!r}; expected one of {FAMILIES}")
    graphs = construction_graphs(T)
    N, M, B = T.vertex_count, T.m, max_cut(T)
    names = TRIPLE_MEMBERS[family_id]
    for name in names:
        G = graphs[name]
        expected = closed_form_nmb(name, N, M, B)
        # b is checked via the composition rules, which need no max-cut search
        if (G.vertex_count, G.m) != expected[:2]:
            raise AssertionError(f"{name}: (n, m) = {(G.vertex_count, G.m)}, expected {expected[:2]}")
    return TripleFamily(family_id, graphs["T"], tuple(graphs[x] for x in names), names)
