"""quasiforce command-line interface.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from quasiforce import forcing, graphs, homs, io, quasirandom, weighted

FORMATS = ("json", "text", "dot", "graph6")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _labels(text: str) -> tuple[int, ...]:
    if text.strip() == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"labels must be comma-separated integers: {text!r}") from exc


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _load_seed_graph(path: str) -> graphs.LabeledGraph:
    T = io.load_graph(path)
    if not T.labels:
        T = graphs.LabeledGraph(T.vertex_count, T.edges, ((0, 0),))
    graphs.check_seed(T)
    return T


def _graph_arg(value: str, seed_path: str | None) -> tuple[str, graphs.LabeledGraph]:
    """A graph file, or a table-graph name when a seed graph is given."""
    if seed_path is not None:
        table = graphs.construction_graphs(_load_seed_graph(seed_path))
        if value in table:
            return value, table[value]
        if not Path(value).exists():
            raise UsageError(f"{value!r} is neither a file nor one of {list(table)}")
    return Path(value).stem, io.load_graph(value)


def _emit(args, payload, text: str | None = None) -> None:
    fmt = args.format
    if fmt == "json" or (fmt == "text" and text is None):
        out = io.dumps(payload)
    elif fmt == "text":
        out = text + "\n"
    else:
        raise UsageError(f"format {fmt!r} not supported by {args.command}")
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


def _write(args, out: str) -> None:
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


# ------------------------------------------------------------------ commands


def cmd_construct(args) -> int:
    if args.kind:
        G = graphs.standard_graph(args.kind, args.size)
    elif args.input:
        G = io.load_graph(args.input)
        if args.pendant:
            G = graphs.pendant(G, args.pendant)
        if args.double is not None:
            G = graphs.double(G, args.double)
    elif args.seed_graph and args.graph:
        _, G = _graph_arg(args.graph, args.seed_graph)
    else:
        raise UsageError("construct needs --kind, --input, or --seed-graph with --graph")
    if args.format == "dot":
        _write(args, io.to_dot(G))
    elif args.format == "graph6":
        _write(args, io.write_graph6(G) + "\n")
    else:
        _emit(args, io.graph_to_dict(G))
    return 0


def cmd_params(args) -> int:
    _, G = _graph_arg(args.graph, args.seed_graph)
    p = graphs.graph_params(G)
    text = "  ".join(f"{k}={v}" for k, v in p.as_dict().items())
    _emit(args, p.as_dict(), text)
    return 0


def cmd_count(args) -> int:
    _, F = _graph_arg(args.pattern, args.seed_graph)
    H = io.load_graph(args.host)
    c = homs.hom_count(F, H, args.engine)
    _emit(args, {"count": str(c), "engine": args.engine}, str(c))
    return 0


def cmd_profile(args) -> int:
    _, F = _graph_arg(args.pattern, args.seed_graph)
    H = io.load_graph(args.host)
    prof = homs.rooted_profile(F, args.labels, H, args.engine)
    counts = {",".join(map(str, k)): str(v) for k, v in prof.as_dict().items()}
    text = "\n".join(f"{k}\t{v}" for k, v in counts.items())
    _emit(args, {"root_labels": list(prof.root_labels), "counts": counts}, text)
    return 0


def cmd_density(args) -> int:
    _, F = _graph_arg(args.pattern, args.seed_graph)
    d = homs.density(F, io.load_graph(args.host), args.engine)
    _emit(args, d.as_dict(), f"t = {d.t}  f = {d.f}")
    return 0


def _weights_from_args(args) -> weighted.WeightedGraph:
    if getattr(args, "weights", None):
        import json

        return weighted.WeightedGraph.from_dict(json.loads(Path(args.weights).read_text()))
    if getattr(args, "w", None):
        return weighted.two_vertex(*args.w)
    if getattr(args, "family", None):
        return weighted.family_weights(args.family, args.x)
    if getattr(args, "p", None) is not None:
        return weighted.WeightedGraph.from_rows([[args.p]])
    raise UsageError("give --weights FILE, --w W00 W01 W11, --family, or --p")


def cmd_wdensity(args) -> int:
    _, F = _graph_arg(args.pattern, args.seed_graph)
    G = _weights_from_args(args)
    d = weighted.weighted_density(F, G, args.engine)
    payload = {"t": {"num": str(d.t.numerator), "den": str(d.t.denominator)}, "t_float": float(d.t), "f": d.f}
    _emit(args, payload, f"t = {d.t}  f = {d.f}")
    return 0


def cmd_table1(args) -> int:
    T = _load_seed_graph(args.seed_graph)
    rows = forcing.table1(T)
    ineq = forcing.inequality_chains(T, rows)
    payload = {"table1": [r.as_dict() for r in rows], "inequalities": [q.as_dict() for q in ineq]}
    _emit(args, payload, forcing.render_table1(rows))
    return 0 if all(r.matches for r in rows) and all(q.holds for q in ineq) else 1


def cmd_disqualify(args) -> int:
    n1, F1 = _graph_arg(args.f1, args.seed_graph)
    n2, F2 = _graph_arg(args.f2, args.seed_graph)
    v = forcing.disqualify_pair(F1, F2, (n1, n2), args.x0, args.tol)
    _emit(args, v.as_dict(), f"{v.names[0]} vs {v.names[1]}: disqualified={v.disqualified} ({v.reason})")
    return 0


def cmd_witness(args) -> int:
    n1, F1 = _graph_arg(args.f1, args.seed_graph)
    n2, F2 = _graph_arg(args.f2, args.seed_graph)
    try:
        w = weighted.crossing_search(F1, F2, args.x0, args.tol, args.path)
    except weighted.NoCrossingError as exc:
        print(f"quasiforce: {exc}", file=sys.stderr)
        return 1
    payload = {"pair": [n1, n2], **w.as_dict()}
    text = f"w* = ({float(w.w[0]):.9f}, {float(w.w[1]):.9f}, {float(w.w[2]):.9f})  f = {w.common_f:.9f}  log gap = {w.gap:.2e}"
    _emit(args, payload, text)
    return 0 if weighted.verify_witness(w, args.tol) else 1


def cmd_sample(args) -> int:
    source = _weights_from_args(args)
    s = quasirandom.sample_w_random(quasirandom.SampleConfig(args.n, args.seed, source))
    if args.format == "graph6":
        _write(args, io.write_graph6(s.graph) + "\n")
    else:
        _emit(args, {**io.graph_to_dict(s.graph), "assignment": list(s.assignment)})
    return 0


def cmd_battery(args) -> int:
    G = io.load_graph(args.graph)
    r = quasirandom.quasirandom_battery(G, args.p, args.trials, args.seed)
    text = "\n".join(f"{k}: {v}" for k, v in r.as_dict().items())
    _emit(args, r.as_dict(), text)
    return 0


def cmd_jensen(args) -> int:
    sweep = quasirandom.jensen_sweep(args.trials, args.seed)
    payload = {k: v for k, v in sweep.items() if k != "examples"}
    _emit(args, payload, f"{sweep['trials']} instances, {sweep['hypothesis_active']} with delta^3 > 3 eps, {sweep['violations']} violations")
    return 0 if sweep["violations"] == 0 else 1


def cmd_analyze(args) -> int:
    T = _load_seed_graph(args.seed_graph)
    report = forcing.analyze_triple(args.family, T, args.n, args.seed, args.x0, args.tol)
    _emit(args, report, forcing.render_report(report))
    return 0 if report["disqualified"] == 3 else 1


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasiforce", description="Graph triples and quasirandomness: constructions, exact counts, crossing witnesses and reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, func, default_format="json"):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=FORMATS, default=default_format)
        p.add_argument("-o", "--output", help="write output here instead of stdout")
        return p

    def seedable(p):
        p.add_argument("--seed-graph", help="JSON/graph6 file of the seed graph T; graph arguments may then name table graphs such as \"T'\"")

    p = add("construct", "Build v, e, ebar, cycles, cliques, the pendant F^(k), the doubling db_I(F), or a table graph of T.", cmd_construct)
    p.add_argument("--kind", choices=["vertex", "isolated_pair", "edge", "cycle", "complete"])
    p.add_argument("--size", type=int, default=1)
    p.add_argument("--input", help="graph file to transform")
    p.add_argument("--pendant", type=int, metavar="K", help="attach K leaves labeled 1..K to label 0")
    p.add_argument("--double", type=_labels, metavar="I", help="double over comma-separated labels")
    p.add_argument("--graph", help="table graph name (with --seed-graph)")
    seedable(p)

    p = add("params", "Report n, m, max-cut b, (n-1)/m and b/m of a graph.", cmd_params)
    p.add_argument("--graph", required=True)
    seedable(p)

    p = add("count", "Exact homomorphism count hom(F, G).", cmd_count, default_format="text")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--engine", choices=homs.ENGINES, default="auto")
    seedable(p)

    p = add("profile", "Rooted counts #{F | I -> a} for every assignment a of the I-labeled vertices.", cmd_profile)
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--labels", type=_labels, required=True)
    p.add_argument("--engine", choices=homs.ENGINES, default="auto")
    seedable(p)

    p = add("density", "Homomorphism density t(F, G) and f = t^(1/m).", cmd_density)
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--engine", choices=homs.ENGINES, default="auto")
    seedable(p)

    def weight_args(p):
        p.add_argument("--weights", help="weighted-graph JSON (e.g. a witness report)")
        p.add_argument("--w", nargs=3, type=_fraction, metavar=("W00", "W01", "W11"))
        p.add_argument("--family", choices=weighted.WEIGHT_FAMILIES)
        p.add_argument("--x", type=_fraction)

    p = add("wdensity", "Density t of F in a weighted graph with loops, e.g. the (1,0,1) and (x,1,x) families.", cmd_wdensity)
    p.add_argument("--pattern", required=True)
    p.add_argument("--engine", choices=("compose", "enumerate"), default="compose")
    weight_args(p)
    seedable(p)

    p = add("table1", "Reproduce the (n, m, b) parameter table for seed graph T and check the inequality chains.", cmd_table1)
    p.add_argument("--seed-graph", required=True)

    def pair_args(p):
        p.add_argument("--f1", required=True)
        p.add_argument("--f2", required=True)
        p.add_argument("--x0", type=_fraction, default=weighted.DEFAULT_X0)
        p.add_argument("--tol", type=float, default=weighted.DEFAULT_TOL)
        seedable(p)

    p = add("disqualify", "Apply the (n-1)/m and b/m criteria to a pair and attach a crossing witness.", cmd_disqualify)
    pair_args(p)

    p = add("witness", "Find weights w* with f_w(F1) = f_w(F2) on a path from (1,0,1) to (x0,1,x0).", cmd_witness)
    pair_args(p)
    p.add_argument("--path", choices=weighted.PATHS, default="detour")

    p = add("sample", "Sample a W-random graph (or G(n,p) with --p) on n vertices.", cmd_sample)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--p", type=_fraction)
    weight_args(p)

    p = add("battery", "Quasirandomness battery: subset densities, spectrum, e and C4 densities.", cmd_battery)
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=quasirandom.DEFAULT_SUBSET_TRIALS)
    p.add_argument("--seed", type=_seed, default=0)

    p = add("jensen", "Randomized audit of approximate equality in Jensen's inequality.", cmd_jensen)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)

    p = add("analyze", "Full report for a triple H1/H2/H3 of seed graph T: table, witnesses, finite-n checks.", cmd_analyze)
    p.add_argument("--family", choices=graphs.FAMILIES, required=True)
    p.add_argument("--seed-graph", required=True)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--x0", type=_fraction, default=weighted.DEFAULT_X0)
    p.add_argument("--tol", type=float, default=weighted.DEFAULT_TOL)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, graphs.GraphError, homs.CapabilityError, ValueError, OSError, KeyError) as exc:
        print(f"quasiforce: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
