from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from quasiforce.graphs import LabeledGraph

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the exhaustive sweeps marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        title = getattr(report, "criterion_title", name)
        detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
        _acceptance[name] = (title + (f" [{detail}]" if detail else ""), report.outcome.upper())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    doc = getattr(item.function, "__doc__", None) or item.name
    report.criterion_title = doc.strip().splitlines()[0]


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda k: int(k.split("_")[1][2:]) if k.startswith("test_ac") else 99):
        title, outcome = _acceptance[name]
        status = "PASS" if outcome == "PASSED" else outcome
        terminalreporter.write_line(f"[{status}] {title}")


def enumerate_homs(F: LabeledGraph, H: LabeledGraph, pinned: dict[int, int] | None = None) -> int:
    """Literal oracle: test every map V(F) -> V(H)."""
    adj = {(u, v) for u, v in H.edges} | {(v, u) for u, v in H.edges}
    pinned = pinned or {}
    count = 0
    for phi in product(range(H.vertex_count), repeat=F.vertex_count):
        if any(phi[v] != a for v, a in pinned.items()):
            continue
        if all((phi[u], phi[v]) in adj for u, v in F.edges):
            count += 1
    return count


def enumerate_weighted(F: LabeledGraph, w: list[list[Fraction]]) -> Fraction:
    k = len(w)
    total = Fraction(0)
    for phi in product(range(k), repeat=F.vertex_count):
        term = Fraction(1)
        for u, v in F.edges:
            term *= w[phi[u]][phi[v]]
        total += term
    return total / k**F.vertex_count


def random_recipe_graph(rng, max_vertices: int = 8, steps: int = 3) -> LabeledGraph:
    """A random labeled pattern built from a small base by pendant/double steps."""
    from quasiforce.graphs import build_graph, double, pendant

    n = int(rng.integers(1, 4))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [p for p in pairs if rng.random() < 0.6]
    extra = {v: lab for lab, v in enumerate(range(1, n)) if rng.random() < 0.5}
    labels = {0: 0} | {v: lab + 5 for v, lab in extra.items()}
    F = build_graph(n, edges, labels)
    for _ in range(steps):
        options = []
        if F.has_label(0):
            for k in (1, 2):
                if F.vertex_count + k <= max_vertices:
                    options.append(("pendant", k))
        labs = [lab for lab, _ in F.labels]
        if labs:
            mask = rng.random(len(labs)) < 0.6
            I = tuple(lab for lab, keep in zip(labs, mask) if keep) or (labs[0],)
            if 2 * F.vertex_count - len(I) <= max_vertices:
                options.append(("double", I))
        if not options:
            break
        op, arg = options[int(rng.integers(len(options)))]
        F = pendant(F, arg) if op == "pendant" else double(F, arg)
    return F


def random_host(rng, n: int, p: float) -> LabeledGraph:
    from quasiforce.graphs import build_graph

    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
