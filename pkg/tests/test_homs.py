from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from conftest import enumerate_homs, random_host, random_recipe_graph

from quasiforce.graphs import GraphError, LabeledGraph, build_graph, construction_graphs, double, pendant, standard_graph
from quasiforce.homs import (
    CapabilityError,
    density,
    f_value,
    float_density,
    graph_host,
    hom_count,
    hom_sum,
    jensen_chain,
    rooted_profile,
    verify_identities,
)
from quasiforce.weighted import WeightedGraph

K3 = standard_graph("complete", 3)
C5 = standard_graph("cycle", 5)
V = standard_graph("vertex")
E = standard_graph("edge", 2)
P2 = pendant(V, 2)
C4 = double(P2, (1, 2))
ENGINES = ("brute", "elimination", "compose")


class TestCounts:
    @pytest.mark.parametrize("engine", ENGINES)
    def test_c4_into_triangle(self, engine):
        assert enumerate_homs(C4, K3) == 18
        assert hom_count(C4, K3, engine) == 18

    @pytest.mark.parametrize("engine", ENGINES)
    def test_odd_cycle_has_no_triangle(self, engine):
        assert hom_count(K3, C5, engine) == 0

    @pytest.mark.parametrize("engine", ENGINES)
    def test_small_patterns(self, engine):
        assert hom_count(V, C5, engine) == 5
        assert hom_count(E, C5, engine) == 10
        assert hom_count(P2, C5, engine) == 20
        assert hom_count(standard_graph("isolated_pair", 2), C5, engine) == 25

    def test_labels_are_ignored_for_counting(self):
        assert hom_count(K3, K3) == hom_count(K3.unlabeled(), K3) == 6

    def test_engines_agree_on_random_recipes(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            F = random_recipe_graph(rng, max_vertices=6)
            H = random_host(rng, int(rng.integers(1, 6)), 0.5)
            expected = enumerate_homs(F, H)
            for engine in ENGINES:
                assert hom_count(F, H, engine) == expected, (F, H, engine)

    def test_engines_agree_on_weighted_hosts(self):
        host = WeightedGraph.from_rows([["1/2", "1/3", 0], ["1/3", 1, "1/4"], [0, "1/4", "1/5"]]).host()
        for F in (C4, pendant(K3, 2), double(pendant(K3, 1), (0, 1))):
            values = {engine: hom_sum(F, host, engine) for engine in ENGINES}
            assert len(set(values.values())) == 1, values
            assert isinstance(values["brute"], Fraction)

    def test_disjoint_union_multiplies(self):
        F = build_graph(5, [(0, 1), (2, 3), (3, 4)])
        H = standard_graph("complete", 4)
        assert hom_count(F, H) == hom_count(E, H) * hom_count(P2, H)

    def test_monotone_in_host(self):
        H = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3)])
        bigger = build_graph(5, list(H.edges) + [(3, 4), (0, 4)])
        for F in construction_graphs(K3).values():
            if F.vertex_count <= 8:
                assert hom_count(F, H) <= hom_count(F, bigger)

    def test_empty_host(self):
        with pytest.raises(GraphError):
            hom_count(K3, LabeledGraph(0, ()))

    def test_brute_force_refuses_large_patterns(self):
        with pytest.raises(CapabilityError):
            hom_count(standard_graph("cycle", 9), K3, "brute")

    def test_unknown_engine(self):
        with pytest.raises(ValueError, match="unknown engine"):
            hom_count(K3, K3, "magic")


class TestProfiles:
    @pytest.mark.parametrize("engine", ENGINES)
    def test_triangle_into_k4(self, engine):
        prof = rooted_profile(K3, (0,), standard_graph("complete", 4), engine)
        assert prof.counts.tolist() == [6, 6, 6, 6]

    @pytest.mark.parametrize("engine", ENGINES)
    def test_cherry_root_profile_is_degree_squared(self, engine):
        prof = rooted_profile(P2, (0,), C5, engine)
        assert prof.counts.tolist() == [4] * 5
        assert prof.total() == 20
        assert sum(d * d for d in C5.degrees()) == 20

    def test_two_labels(self):
        prof = rooted_profile(P2, (1, 2), standard_graph("complete", 3))
        # common neighbours in K3: 1 when distinct, 2 when equal
        assert prof[0, 0] == 2 and prof[0, 1] == 1

    def test_bounded_by_free_vertices(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            F = random_recipe_graph(rng, max_vertices=6)
            H = random_host(rng, 5, 0.6)
            labs = tuple(lab for lab, _ in F.labels)
            prof = rooted_profile(F, labs, H)
            assert max(prof.counts.ravel().tolist()) <= 5 ** (F.vertex_count - len(labs))

    def test_matches_pinned_enumeration(self):
        H = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
        Tp = pendant(K3, 1)
        prof = rooted_profile(Tp, (0, 1), H)
        for a in range(5):
            for b in range(5):
                assert prof[a, b] == enumerate_homs(Tp, H, {0: a, 3: b})

    def test_missing_label(self):
        with pytest.raises(GraphError, match="absent"):
            rooted_profile(K3, (4,), K3)


class TestIdentities:
    def test_edge_on_c5(self):
        report = verify_identities(E, (0,), C5)
        assert report.passed
        assert {c.name: (c.lhs, c.rhs) for c in report.checks}["total_probability"] == (10, 10)
        assert {c.name: c.lhs for c in report.checks}["doubling"] == 20

    def test_cherry_on_triangle(self):
        report = verify_identities(P2, (1, 2), K3)
        values = {c.name: (c.lhs, c.rhs) for c in report.checks}
        assert values["total_probability"] == (12, 12)
        assert values["doubling"] == (18, 18)
        assert report.passed

    @pytest.mark.parametrize("engine", ENGINES)
    def test_random_instances(self, engine):
        rng = np.random.default_rng(5)
        for _ in range(15):
            F = random_recipe_graph(rng, max_vertices=5)
            H = random_host(rng, int(rng.integers(2, 6)), 0.5)
            labs = [lab for lab, _ in F.labels]
            I = [lab for lab in labs if rng.random() < 0.5]
            report = verify_identities(F, I, H, engine, k=int(rng.integers(1, 3)))
            assert report.passed, report

    def test_jensen_chain(self):
        for H in (K3, C5, build_graph(4, [(0, 1), (1, 2)])):
            chain = jensen_chain(H)
            assert chain["e_to_P2"][2] and chain["P2_to_C4"][2]
        chain = jensen_chain(C5)
        assert chain["e_to_P2"][:2] == (Fraction(4), Fraction(4))


class TestDensity:
    def test_exact_density(self):
        d = density(E, C5)
        assert d.t == Fraction(2, 5)
        assert d.f == pytest.approx(0.4)
        assert density(C4, K3).t == Fraction(18, 81)

    def test_f_of_zero_and_edgeless(self):
        assert f_value(Fraction(0), 3) == 0.0
        assert f_value(Fraction(1, 2), 0) is None

    def test_f_survives_underflow(self):
        assert f_value(Fraction(1, 2**2000), 1000) == pytest.approx(0.25)

    def test_float_mode_agrees(self):
        H = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
        for F in construction_graphs(K3).values():
            assert float_density(F, H) == pytest.approx(float(density(F, H, "compose").t), rel=1e-9)

    def test_float_host_has_uniform_measure(self):
        h = graph_host(C5, exact=False)
        assert h.mu.sum() == pytest.approx(1.0)
