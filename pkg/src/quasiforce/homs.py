"""Exact homomorphism counts, rooted profiles and densities.

Three engines are available:

* ``brute``   -- backtracking enumeration of every homomorphism (the oracle);
* ``elimination`` -- sum-product variable elimination on the pattern;
* ``compose`` -- rooted-profile algebra following a graph's construction
  recipe (pendant multiplies by degree powers, doubling squares a profile).

All three accept a weighted host: a symmetric matrix ``W`` and a vertex
measure ``mu``; an ordinary host graph is the 0/1 adjacency matrix with unit
measure, in which case the result is the exact homomorphism count.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from quasiforce.elimination import _einsum, min_degree_order, sum_product
from quasiforce.graphs import GraphError, LabeledGraph, double, pendant, standard_graph

ENGINES = ("auto", "brute", "elimination", "compose")
BRUTE_MAX_PATTERN = 8
BRUTE_MAX_NODES = 5_000_000
ELIMINATION_MAX_ENTRIES = 50_000_000
EXACT_MAX_WORK = 20_000_000


class CapabilityError(RuntimeError):
    """The requested engine cannot handle this pattern/host combination."""


@dataclass(frozen=True)
class Host:
    """Edge-weight matrix plus vertex measure; exact when dtype is object."""

    W: np.ndarray
    mu: np.ndarray

    @property
    def size(self) -> int:
        return len(self.mu)

    @property
    def exact(self) -> bool:
        return self.W.dtype == object

    def degree(self) -> np.ndarray:
        return self.W @ self.mu


def exact_array(values) -> np.ndarray:
    arr = np.empty(np.shape(values), dtype=object)
    flat = np.asarray(values, dtype=object).ravel()
    arr.ravel()[:] = [v if isinstance(v, (int, Fraction)) else int(v) for v in flat]
    return arr


def graph_host(G: LabeledGraph, exact: bool = True) -> Host:
    """Host for counting homomorphisms into ``G``.

    Exact mode counts with Python integers.  Float mode uses measure ``1/n``
    so the result is the density ``t`` directly (no overflow at large n).
    """
    if G.vertex_count == 0:
        raise GraphError("host graph is empty")
    A = G.adjacency_matrix()
    if exact:
        return Host(exact_array(A), exact_array(np.ones(G.vertex_count, dtype=np.int64)))
    n = G.vertex_count
    return Host(A.astype(float), np.full(n, 1.0 / n))


def _as_host(host) -> Host:
    if isinstance(host, Host):
        return host
    if isinstance(host, LabeledGraph):
        return graph_host(host)
    raise TypeError(f"cannot use {type(host).__name__} as a host")


# ---------------------------------------------------------------- brute force


def _bfs_order(F: LabeledGraph, first: Sequence[int]) -> list[int]:
    adj = F.adjacency()
    order = list(first)
    seen = set(order)
    for start in list(first) + list(range(F.vertex_count)):
        if start not in seen:
            seen.add(start)
            order.append(start)
        i = order.index(start)
        while i < len(order):
            for w in adj[order[i]]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
            i += 1
    return order


def _brute(F: LabeledGraph, host: Host, pinned: dict[int, int]):
    """Sum of weight products over all maps extending ``pinned`` (vertex -> host vertex)."""
    n = host.size
    # plain lists: element access on numpy arrays dominates the search otherwise
    W, mu = host.W.tolist(), host.mu.tolist()
    order = _bfs_order(F, list(pinned))
    pos = {v: i for i, v in enumerate(order)}
    back: list[list[int]] = [[] for _ in order]
    for u, v in F.edges:
        a, b = sorted((pos[u], pos[v]))
        back[b].append(a)
    nonzero = [[j for j in range(n) if W[i][j] != 0] for i in range(n)]
    budget = [BRUTE_MAX_NODES]
    zero = 0 if host.exact else 0.0
    assign = [0] * len(order)
    k = len(pinned)
    for i, v in enumerate(order[:k]):
        assign[i] = pinned[v]
    for i in range(k):
        for a in back[i]:
            if W[assign[a]][assign[i]] == 0:
                return zero

    if host.exact and all(x == 1 for x in mu) and all(w in (0, 1) for row in W for w in row):
        return _brute_bits(W, order, back, assign, k)

    def rec(i: int):
        if i == len(order):
            return 1
        budget[0] -= 1
        if budget[0] < 0:
            raise CapabilityError(f"brute-force engine exceeded {BRUTE_MAX_NODES} search nodes")
        preds = back[i]
        cands = nonzero[assign[preds[0]]] if preds else range(n)
        total = zero
        for c in cands:
            w = mu[c]
            for a in preds:
                w = w * W[assign[a]][c]
                if w == 0:
                    break
            if w == 0:
                continue
            assign[i] = c
            total = total + w * rec(i + 1)
        return total

    return rec(k)


def _brute_bits(W: list[list[int]], order: list[int], back: list[list[int]], assign: list[int], start: int) -> int:
    """Same search for a 0/1 host: candidates are neighbour-mask intersections, the last vertex is a popcount."""
    n = len(W)
    full = (1 << n) - 1
    masks = [sum(1 << j for j in range(n) if W[i][j]) for i in range(n)]
    last = len(order) - 1
    budget = [BRUTE_MAX_NODES]

    def cands(i: int) -> int:
        m = full
        for a in back[i]:
            m &= masks[assign[a]]
        return m

    def rec(i: int) -> int:
        if i > last:
            return 1
        if i == last:
            return cands(i).bit_count()
        budget[0] -= 1
        if budget[0] < 0:
            raise CapabilityError(f"brute-force engine exceeded {BRUTE_MAX_NODES} search nodes")
        m = cands(i)
        total = 0
        while m:
            low = m & -m
            assign[i] = low.bit_length() - 1
            total += rec(i + 1)
            m ^= low
        return total

    return rec(start)


def _brute_profile(F: LabeledGraph, host: Host, keep_vertices: Sequence[int]) -> np.ndarray:
    if F.vertex_count > BRUTE_MAX_PATTERN:
        raise CapabilityError(
            f"brute-force engine handles patterns with at most {BRUTE_MAX_PATTERN} vertices, "
            f"got {F.vertex_count}"
        )
    n = host.size
    out = np.empty((n,) * len(keep_vertices), dtype=host.W.dtype)
    for idx in np.ndindex(out.shape):
        out[idx] = _brute(F, host, dict(zip(keep_vertices, idx)))
    return out


# ---------------------------------------------------------------- elimination


def _elimination_profile(
    F: LabeledGraph, host: Host, keep_vertices: Sequence[int], skip_edges: Iterable = ()
) -> np.ndarray:
    skip = set(skip_edges)
    edges = [e for e in F.edges if e not in skip]
    _, width = min_degree_order(range(F.vertex_count), edges, keep_vertices)
    table = host.size ** max(width - 1, len(keep_vertices))
    work = host.size**width
    if table > ELIMINATION_MAX_ENTRIES or (host.exact and work > EXACT_MAX_WORK):
        raise CapabilityError(
            f"elimination width {width} on a host of size {host.size} is too costly "
            f"(table limit {ELIMINATION_MAX_ENTRIES}, exact work limit {EXACT_MAX_WORK})"
        )
    factors = [((u, v), host.W) for u, v in edges]
    return sum_product(range(F.vertex_count), factors, host.mu, keep_vertices)


# ---------------------------------------------------------------- composition


def _ones(host: Host) -> np.ndarray:
    ones = np.ones(host.size, dtype=host.mu.dtype)
    if host.exact:
        ones[:] = 1
    return ones


def _contract(operands, out: Sequence[int]) -> np.ndarray:
    return _einsum([(tuple(s), a) for s, a in operands], list(out))


def _compose(G: LabeledGraph, host: Host, keep: tuple[int, ...], excl: frozenset[int]) -> np.ndarray:
    """Profile of ``G`` over labels ``keep`` (axes in that order).

    Edges whose endpoints both carry labels in ``excl`` are left out; doubling
    uses this so an edge shared by the two copies is counted once.
    """
    recipe = G.recipe
    if recipe is None:
        lm = G.label_map
        skip = [
            (u, v)
            for u, v in G.edges
            if any(lm.get(x) == u for x in excl) and any(lm.get(x) == v for x in excl)
        ]
        return _elimination_profile(G, host, [lm[x] for x in keep], skip)

    if recipe[0] == "pendant":
        _, F, k = recipe
        leaves = [x for x in keep if 1 <= x <= k]
        rest = [x for x in keep if not 1 <= x <= k]
        child_keep = tuple(sorted(set(rest) | {0}))
        child = _compose(F, host, child_keep, frozenset(x for x in excl if not 1 <= x <= k))
        ops = [(child_keep, child)]
        free = k - len(leaves)
        if free:
            ops.append(((0,), host.degree() ** free))
        for i in leaves:
            if 0 in excl and i in excl:
                ops.append(((i,), _ones(host)))
            else:
                ops.append(((0, i), host.W))
        if 0 not in keep:
            ops.append(((0,), host.mu))
        return _contract(ops, keep)

    if recipe[0] == "double":
        _, F, I = recipe
        I = tuple(I)
        half = _compose(F, host, I, frozenset(I))
        ops = [(I, half * half)]
        lm = F.label_map
        inv = {v: lab for lab, v in lm.items() if lab in I}
        for u, v in F.edges:
            if u in inv and v in inv:
                a, b = inv[u], inv[v]
                if not (a in excl and b in excl):
                    ops.append(((a, b), host.W))
        for x in I:
            if x not in keep:
                ops.append(((x,), host.mu))
        return _contract(ops, keep)

    raise GraphError(f"unknown recipe {recipe[0]!r}")


# ---------------------------------------------------------------- public API


def _profile_array(F: LabeledGraph, labels: Sequence[int], host: Host, engine: str) -> np.ndarray:
    lm = F.label_map
    missing = [x for x in labels if x not in lm]
    if missing:
        raise GraphError(f"labels {missing} absent from pattern")
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    keep_vertices = [lm[x] for x in labels]
    if engine == "brute":
        return _brute_profile(F, host, keep_vertices)
    if engine == "elimination":
        return _elimination_profile(F, host, keep_vertices)
    return _compose(F, host, tuple(labels), frozenset())


def hom_sum(F: LabeledGraph, host, engine: str = "auto"):
    """Sum over all maps V(F) -> V(host) of measure times edge-weight products."""
    host = _as_host(host)
    if host.size == 0:
        raise GraphError("host is empty")
    value = _profile_array(F, (), host, engine)
    return value.item() if isinstance(value, np.ndarray) else value


def hom_count(pattern: LabeledGraph, host: LabeledGraph, engine: str = "auto") -> int:
    """Exact number of homomorphisms from ``pattern`` to ``host`` (labels ignored)."""
    if host.vertex_count == 0:
        raise GraphError("host graph is empty")
    return int(hom_sum(pattern, graph_host(host), engine))


@dataclass(frozen=True)
class RootedProfile:
    root_labels: tuple[int, ...]
    counts: np.ndarray

    def __getitem__(self, assignment):
        if not isinstance(assignment, tuple):
            assignment = (assignment,)
        return self.counts[assignment]

    def total(self):
        return sum(self.counts.ravel().tolist())

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {idx: self.counts[idx] for idx in np.ndindex(self.counts.shape)}


def rooted_profile(
    pattern: LabeledGraph, I: Iterable[int], host, engine: str = "auto"
) -> RootedProfile:
    """#{pattern | I -> a} for every assignment ``a`` of the I-labeled vertices."""
    labels = tuple(sorted(set(I)))
    h = _as_host(host)
    return RootedProfile(labels, _profile_array(pattern, labels, h, engine))


def log_fraction(t: Fraction) -> float:
    return math.log(t.numerator) - math.log(t.denominator)


def f_value(t, m: int) -> float | None:
    """t^(1/m) via the log domain; 0 when t = 0, None for edgeless patterns."""
    if m == 0:
        return None
    if t == 0:
        return 0.0
    logt = log_fraction(t) if isinstance(t, Fraction) else math.log(t)
    return math.exp(logt / m)


@dataclass(frozen=True)
class Density:
    t: Fraction
    f: float | None

    def as_dict(self) -> dict:
        return {
            "t": {"num": str(self.t.numerator), "den": str(self.t.denominator)},
            "t_float": float(self.t),
            "f": self.f,
        }


def density(pattern: LabeledGraph, host: LabeledGraph, engine: str = "auto") -> Density:
    count = hom_count(pattern, host, engine)
    t = Fraction(count, host.vertex_count**pattern.vertex_count)
    return Density(t, f_value(t, pattern.m))


def float_density(pattern: LabeledGraph, host: LabeledGraph) -> float:
    """Homomorphism density in binary64, for hosts too large for exact counting."""
    return float(hom_sum(pattern, graph_host(host, exact=False), "compose"))


# ---------------------------------------------------------------- identities


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    lhs: int
    rhs: int
    counterexample: tuple[int, ...] | None = None


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_identities(
    F: LabeledGraph, I: Iterable[int], host: LabeledGraph, engine: str = "brute", k: int = 1
) -> IdentityReport:
    """Check the total-probability, doubling and pendant identities on one host.

    ``I`` names the labeled sub-pattern H.  Profiles come from ``engine``;
    the counts they are compared against come from the elimination engine
    run on the materialized graphs.
    """
    I = tuple(sorted(set(I)))
    h = graph_host(host)
    prof = rooted_profile(F, I, h, engine).counts.ravel().tolist()

    count = hom_count(F.unlabeled(), host, "elimination")
    checks = [IdentityCheck("total_probability", count == sum(prof), count, sum(prof))]

    doubled = hom_count(double(F, I).unlabeled(), host, "elimination")
    squares = sum(x * x for x in prof)
    checks.append(IdentityCheck("doubling", doubled == squares, doubled, squares))

    if F.has_label(0):
        root = rooted_profile(F, (0,), h, engine).counts
        grown = pendant(F, k)
        grown = LabeledGraph(grown.vertex_count, grown.edges, grown.labels)
        extended = rooted_profile(grown, (0,), h, "elimination").counts
        deg = host.degrees()
        predicted = [int(root[u]) * deg[u] ** k for u in range(host.vertex_count)]
        bad = next((u for u in range(host.vertex_count) if extended[u] != predicted[u]), None)
        checks.append(
            IdentityCheck(
                "pendant",
                bad is None,
                sum(extended.tolist()),
                sum(predicted),
                None if bad is None else (bad,),
            )
        )
    return IdentityReport(tuple(checks))


def jensen_chain(host: LabeledGraph) -> dict[str, tuple[Fraction, Fraction, bool]]:
    """The two exact inequalities (#e/#v)^2 <= #P2/#v and (#P2/#ebar)^2 <= #C4/#ebar."""
    v = standard_graph("vertex")
    e = standard_graph("edge", 2)
    p2 = pendant(v, 2)
    c4 = double(p2, (1, 2))
    ebar = standard_graph("isolated_pair", 2)
    cnt = {name: hom_count(g, host) for name, g in (("v", v), ("e", e), ("P2", p2), ("C4", c4), ("ebar", ebar))}
    first = (Fraction(cnt["e"], cnt["v"]) ** 2, Fraction(cnt["P2"], cnt["v"]))
    second = (Fraction(cnt["P2"], cnt["ebar"]) ** 2, Fraction(cnt["C4"], cnt["ebar"]))
    return {
        "e_to_P2": (*first, first[0] <= first[1]),
        "P2_to_C4": (*second, second[0] <= second[1]),
    }
