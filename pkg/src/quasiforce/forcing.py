"""Parameter table, inequality chains, pair disqualification and triple reports."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from quasiforce.graphs import (
    GraphError,
    LabeledGraph,
    closed_form_nmb,
    construct_triple,
    construction_graphs,
    double,
    graph_params,
    is_connected,
    max_cut,
    pendant,
    seed_graph,
    standard_graph,
)
from quasiforce.homs import float_density, f_value
from quasiforce.quasirandom import (
    C4_GAP_ENVELOPE,
    QuasiReport,
    SampleConfig,
    gnp,
    limit_spectrum,
    quasirandom_battery,
    sample_w_random,
)
from quasiforce.weighted import (
    DEFAULT_TOL,
    DEFAULT_X0,
    NoCrossingError,
    WitnessReport,
    crossing_search,
    weighted_density,
)

TABLE_ORDER = (
    "e",
    "C_2N",
    "T",
    "T'",
    "db_{0,1}(T')",
    "db_{1,2}(db_0(T^(N))'')",
    "db_{1,2}(db_0^2(T)'')",
)
SANITY_TOL = 0.02
X0_RETRIES = 6


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QUASIFORCE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Table1Row:
    graph_name: str
    n: int
    m: int
    b: int
    g1: Fraction
    g2: Fraction
    expected: tuple[int, int, int]

    @property
    def matches(self) -> bool:
        return (self.n, self.m, self.b) == self.expected

    def as_dict(self) -> dict:
        return {
            "graph": self.graph_name,
            "n": self.n,
            "m": self.m,
            "b": self.b,
            "g1": str(self.g1),
            "g2": str(self.g2),
            "closed_form": list(self.expected),
            "matches": self.matches,
        }


def table1(T: LabeledGraph) -> list[Table1Row]:
    """The seven table rows, b from exact max-cut, each checked against its closed form."""
    graphs = construction_graphs(T)
    N, M, B = T.vertex_count, T.m, max_cut(T)
    rows = []
    for name in TABLE_ORDER:
        p = graph_params(graphs[name])
        rows.append(Table1Row(name, p.n, p.m, p.b, p.g1, p.g2, closed_form_nmb(name, N, M, B)))
    return rows


def render_table1(rows: list[Table1Row]) -> str:
    head = f"{'graph':<26}{'n':>5}{'m':>6}{'b':>6}{'(n-1)/m':>12}{'b/m':>10}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.graph_name:<26}{r.n:>5}{r.m:>6}{r.b:>6}{str(r.g1):>12}{str(r.g2):>10}")
    return "\n".join(lines)


@dataclass(frozen=True)
class Inequality:
    family: str
    description: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "inequality": self.description,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
        }


def inequality_chains(T: LabeledGraph, rows: list[Table1Row] | None = None) -> list[Inequality]:
    """Every strict g1/g2 comparison used to disqualify the nine pairs.

    Values come from the computed rows (exact max-cut), not the closed forms.
    """
    rows = rows or table1(T)
    by = {r.graph_name: r for r in rows}
    N, M = T.vertex_count, T.m
    B = by["T"].b
    Tp, D1 = "T'", "db_{0,1}(T')"
    D2, D3 = "db_{1,2}(db_0^2(T)'')", "db_{1,2}(db_0(T^(N))'')"

    def g(fn, a, b, fam):
        ra, rb = by[a], by[b]
        return Inequality(fam, f"{fn}({a}) > {fn}({b})", getattr(ra, fn), getattr(rb, fn))

    out = [
        Inequality("T", "M >= N  (as M + 1 > N)", Fraction(M + 1), Fraction(N)),
        Inequality("T", "M > B", Fraction(M), Fraction(B)),
        Inequality("T", "N >= 3  (as N > 2)", Fraction(N), Fraction(2)),
    ]
    for fam, chain in (("H1", ("C_2N", Tp, D1)), ("H2", ("e", Tp, D2)), ("H3", (D3, Tp, "T"))):
        for fn in ("g1", "g2"):
            out.append(g(fn, chain[0], chain[1], fam))
            out.append(g(fn, chain[1], chain[2], fam))
    out.append(Inequality("H3", "(M+1)(4N-1) > 4N^2", Fraction((M + 1) * (4 * N - 1)), Fraction(4 * N * N)))
    return out


@dataclass(frozen=True)
class PairVerdict:
    names: tuple[str, str]
    pair: tuple[LabeledGraph, LabeledGraph]  # ordered so that F1 has the larger g1
    g1: tuple[Fraction, Fraction]
    g2: tuple[Fraction, Fraction]
    g1_condition: bool
    g2_condition: bool
    disqualified: bool
    reason: str
    witness: WitnessReport | None = None

    def as_dict(self) -> dict:
        return {
            "pair": list(self.names),
            "g1": [str(x) for x in self.g1],
            "g2": [str(x) for x in self.g2],
            "g1_condition": self.g1_condition,
            "g2_condition": self.g2_condition,
            "disqualified": self.disqualified,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.as_dict(),
        }


def disqualify_pair(
    F1: LabeledGraph,
    F2: LabeledGraph,
    names: tuple[str, str] = ("F1", "F2"),
    x0=DEFAULT_X0,
    tol: float = DEFAULT_TOL,
) -> PairVerdict:
    """Apply the (n-1)/m and b/m criteria; attach a crossing witness when both hold.

    ``disqualified = False`` is not a claim that the pair is forcing.
    """
    if not (is_connected(F1) and is_connected(F2)):
        raise GraphError("pair disqualification needs connected graphs")
    p1, p2 = graph_params(F1), graph_params(F2)
    if p1.g1 < p2.g1 or (p1.g1 == p2.g1 and p1.g2 < p2.g2):
        F1, F2, p1, p2 = F2, F1, p2, p1
        names = (names[1], names[0])
    c1 = p1.g1 > p2.g1
    c2 = p1.g2 > p2.g2
    g1, g2 = (p1.g1, p2.g1), (p1.g2, p2.g2)
    if not (c1 and c2):
        failing = []
        if not c1:
            failing.append(f"g1 not strictly ordered ({p1.g1} vs {p2.g1})")
        if not c2:
            failing.append(f"g2 not ordered with g1 ({p1.g2} vs {p2.g2})")
        return PairVerdict(names, (F1, F2), g1, g2, c1, c2, False, "; ".join(failing))
    x = Fraction(x0)
    last_error = None
    for _ in range(X0_RETRIES):
        try:
            witness = crossing_search(F1, F2, x, tol)
            break
        except NoCrossingError as exc:
            last_error = exc
            x /= 10
    else:
        return PairVerdict(names, (F1, F2), g1, g2, c1, c2, False, f"criteria hold but {last_error}")
    return PairVerdict(names, (F1, F2), g1, g2, c1, c2, True, "g1 and g2 strictly ordered; witness found", witness)


def _c4() -> LabeledGraph:
    return double(pendant(standard_graph("vertex"), 2), (1, 2))


def witness_demo(verdict: PairVerdict, n: int, seed: int, subset_trials: int = 200) -> dict:
    """Sample from a witness and show the pair agrees while the host is not quasirandom."""
    w = verdict.witness
    F1, F2 = verdict.pair
    p = w.common_f
    t_c4 = weighted_density(_c4(), w.weights).t
    analytic_gap = abs(t_c4 - Fraction(p) ** 4)
    sample = sample_w_random(SampleConfig(n, seed, w.weights)).graph
    battery = quasirandom_battery(sample, p, subset_trials, seed)
    f_emp = [f_value(float_density(F, sample), F.m) for F in (F1, F2)]
    return {
        "pair": list(verdict.names),
        "common_f": p,
        "analytic_t_c4": float(t_c4),
        "analytic_c4_gap": float(analytic_gap),
        "limit_spectrum": limit_spectrum(w.weights),
        "battery": battery.as_dict(),
        "f_empirical": f_emp,
        "f_deviation": [abs(f - p) for f in f_emp],
        "flagged_non_quasirandom": battery.flagged,
    }


def forcing_sanity(members: dict[str, LabeledGraph], n: int, seed: int, subset_trials: int = 200) -> dict:
    """Finite-n check on G(n, 1/2): every member's f should sit near 1/2.

    This is a sanity check on one finite host, not a proof of forcing.
    """
    G = gnp(n, Fraction(1, 2), seed)
    battery: QuasiReport = quasirandom_battery(G, 0.5, subset_trials, seed)
    f_emp = {name: f_value(float_density(F, G), F.m) for name, F in members.items()}
    return {
        "note": "finite-n sanity check on a G(n, 1/2) sample; the o(1) statements are not verified",
        "n": n,
        "seed": seed,
        "f_empirical": f_emp,
        "within_tolerance": {k: abs(v - 0.5) <= SANITY_TOL for k, v in f_emp.items()},
        "tolerance": SANITY_TOL,
        "battery": battery.as_dict(),
    }


def all_pairs(members: dict[str, LabeledGraph]) -> list[tuple[str, str]]:
    names = list(members)
    return [(names[i], names[j]) for i in range(len(names)) for j in range(i + 1, len(names))]


def analyze_triple(
    family_id: str,
    T: LabeledGraph,
    sample_n: int = 400,
    seed: int = 0,
    x0=DEFAULT_X0,
    tol: float = DEFAULT_TOL,
) -> dict:
    """Construct the triple, disqualify its three pairs, run the finite-n checks."""
    triple = construct_triple(family_id, T)
    members = dict(zip(triple.names, triple.members))
    rows = table1(T)
    pairs = all_pairs(members)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        verdicts = list(
            pool.map(lambda ab: disqualify_pair(members[ab[0]], members[ab[1]], ab, x0, tol), pairs)
        )
    demo = next((v for v in verdicts if v.disqualified), None)
    T0 = seed_graph(T)
    return {
        "family": family_id,
        "seed_graph": {"vertices": T0.vertex_count, "edges": [list(e) for e in T0.edges], "labels": {"0": T0.vertex_of(0)}},
        "members": list(triple.names),
        "table1": [r.as_dict() for r in rows],
        "inequalities": [q.as_dict() for q in inequality_chains(T, rows) if q.family in ("T", family_id)],
        "pairs": [v.as_dict() for v in verdicts],
        "disqualified": sum(v.disqualified for v in verdicts),
        "sanity": forcing_sanity(members, sample_n, seed),
        "witness_demo": None if demo is None else witness_demo(demo, sample_n, seed),
        "c4_envelope": C4_GAP_ENVELOPE,
    }


def render_report(report: dict) -> str:
    lines = [f"family {report['family']}: members {', '.join(report['members'])}"]
    for p in report["pairs"]:
        w = p["witness"]
        extra = "" if w is None else f"  w* = {[round(x, 6) for x in (w['weights_float'][0][0], w['weights_float'][0][1], w['weights_float'][1][1])]}, log gap {w['log_gap']:.2e}"
        lines.append(f"  {p['pair'][0]} vs {p['pair'][1]}: {'disqualified' if p['disqualified'] else 'not disqualified'}{extra}")
    lines.append(f"  {report['disqualified']}/3 pairs disqualified")
    s = report["sanity"]
    for name, f in s["f_empirical"].items():
        lines.append(f"  G({s['n']},1/2): f({name}) = {f:.4f}")
    d = report["witness_demo"]
    if d:
        b = d["battery"]
        lines.append(
            f"  witness sample: lambda2/n = {b['lambda2_abs_over_n']:.3f}, c4_gap = {b['c4_gap']:.4f}, "
            f"flagged = {d['flagged_non_quasirandom']}"
        )
    return "\n".join(lines)
