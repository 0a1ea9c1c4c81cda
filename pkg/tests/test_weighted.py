from __future__ import annotations

import math
from fractions import Fraction

import pytest
from conftest import enumerate_weighted

from quasiforce.graphs import GraphError, build_graph, construction_graphs, double, max_cut, pendant, standard_graph
from quasiforce.weighted import (
    DEFAULT_WAYPOINT,
    NoCrossingError,
    WeightedGraph,
    closed_form_f,
    crossing_search,
    family_weights,
    log_t_slope,
    path_point,
    two_vertex,
    verify_witness,
    weighted_density,
)

K3 = standard_graph("complete", 3)
E = standard_graph("edge", 2)
C4 = double(pendant(standard_graph("vertex"), 2), (1, 2))
GRAPHS = construction_graphs(K3)


def t_polynomial(F) -> list[Fraction]:
    """Exact coefficients of x -> t(F, (x,1,x)) by interpolation at m+1 points."""
    m = F.m
    xs = [Fraction(j, m + 1) for j in range(m + 1)]
    ys = [weighted_density(F, family_weights("x1x", x)).t for x in xs]
    # solve the Vandermonde system by Gaussian elimination over Q
    rows = [[x**p for p in range(m + 1)] + [y] for x, y in zip(xs, ys)]
    size = m + 1
    for c in range(size):
        piv = next(r for r in range(c, size) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(size):
            if r != c and rows[r][c]:
                factor = rows[r][c] / rows[c][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[c])]
    return [rows[i][size] / rows[i][i] for i in range(size)]


class TestWeightedGraph:
    def test_validation(self):
        with pytest.raises(GraphError, match="symmetric"):
            WeightedGraph.from_rows([[1, 0], [1, 1]])
        with pytest.raises(GraphError, match="outside"):
            two_vertex(2, 0, 1)
        with pytest.raises(GraphError):
            WeightedGraph(())

    def test_round_trip(self):
        G = two_vertex(Fraction(1, 3), "1/2", 0.25)
        assert WeightedGraph.from_dict(G.as_dict()) == G
        assert G.weights[1][1] == Fraction(1, 4)

    def test_diagonal_distance(self):
        assert two_vertex(1, 0, 1).diagonal_distance() == 1
        assert two_vertex("1/2", "1/2", "1/2").diagonal_distance() == 0


class TestDensities:
    def test_edge_on_x1x(self):
        for x in (Fraction(0), Fraction(1, 3), Fraction(1)):
            assert weighted_density(E, family_weights("x1x", x)).t == (1 + x) / 2

    def test_triangle(self):
        assert weighted_density(K3, two_vertex(1, 0, 1)).t == Fraction(1, 4)
        x = Fraction(2, 7)
        assert weighted_density(K3, family_weights("x1x", x)).t == (x**3 + 3 * x) / 4

    @pytest.mark.parametrize("name", [k for k, G in GRAPHS.items() if G.vertex_count <= 8])
    def test_engines_match_literal_enumeration(self, name):
        F = GRAPHS[name]
        G = two_vertex("1/3", "3/5", "1/7")
        rows = [list(r) for r in G.weights]
        expected = enumerate_weighted(F, rows)
        assert weighted_density(F, G, "compose").t == expected
        assert weighted_density(F, G, "enumerate").t == expected

    def test_three_vertex_weights(self):
        G = WeightedGraph.from_rows([["1/2", "1/3", 0], ["1/3", 1, "1/4"], [0, "1/4", "1/5"]])
        F = pendant(K3, 2)
        assert weighted_density(F, G).t == enumerate_weighted(F, [list(r) for r in G.weights])

    def test_enumeration_limit(self):
        with pytest.raises(GraphError, match="enumeration"):
            weighted_density(GRAPHS["db_{1,2}(db_0^2(T)'')"], two_vertex(1, 0, 1), "enumerate")


class TestClosedForms:
    @pytest.mark.parametrize("name", list(GRAPHS))
    def test_101_family(self, name):
        F = GRAPHS[name]
        cf = closed_form_f(F, "101")
        assert cf.f_exponent == Fraction(F.vertex_count - 1, F.m)
        got = weighted_density(F, family_weights("101")).f
        assert abs(got - 2.0 ** -float(cf.f_exponent)) <= 1e-12

    @pytest.mark.parametrize("name", [k for k, G in GRAPHS.items() if G.m <= 8])
    def test_x1x_lowest_degree(self, name):
        F = GRAPHS[name]
        coeffs = t_polynomial(F)
        lowest = next(i for i, c in enumerate(coeffs) if c != 0)
        assert lowest == F.m - max_cut(F)
        assert closed_form_f(F, "x1x").t_exponent == lowest
        assert all(c >= 0 for c in coeffs)

    def test_slopes(self):
        assert log_t_slope(GRAPHS["T'"]) == pytest.approx(1, abs=0.05)
        assert log_t_slope(GRAPHS["db_{0,1}(T')"]) == pytest.approx(2, abs=0.05)
        assert log_t_slope(E) == pytest.approx(0, abs=0.05)

    def test_needs_connected_graph_with_edges(self):
        with pytest.raises(GraphError):
            closed_form_f(standard_graph("isolated_pair", 2), "101")
        with pytest.raises(ValueError):
            closed_form_f(K3, "xyz")


class TestCrossing:
    def test_detour_stays_off_the_diagonal(self):
        x0 = Fraction(1, 1000)
        for j in range(65):
            w = path_point(Fraction(j, 64), x0)
            assert max(w) - min(w) >= Fraction(1, 4)
        assert path_point(Fraction(1, 2), x0) == DEFAULT_WAYPOINT
        assert path_point(Fraction(0), x0) == (1, 0, 1)
        assert path_point(Fraction(1), x0) == (x0, 1, x0)

    def test_segment_crosses_diagonal(self):
        x0 = Fraction(1, 1000)
        w = path_point(1 / (2 - x0), x0, "segment")
        assert w[0] == w[1] == w[2]

    def test_edge_and_pendant_triangle(self):
        r = crossing_search(GRAPHS["T'"], E)
        assert abs(r.f1 - r.f2) <= 1e-9
        assert r.diagonal_distance >= Fraction(1, 100)
        assert verify_witness(r)

    def test_segment_only_finds_the_constant_root(self):
        r = crossing_search(GRAPHS["T'"], GRAPHS["db_{0,1}(T')"], path="segment")
        assert r.diagonal_distance < Fraction(1, 100)

    def test_identical_graphs_have_zero_gap(self):
        r = crossing_search(K3, K3)
        assert r.gap == 0 and r.steps == 0

    def test_edge_versus_c4_never_crosses(self):
        # t(C4) >= t(e)^4 everywhere, so h keeps one sign
        with pytest.raises(NoCrossingError):
            crossing_search(E, C4)

    def test_x0_zero_steps_inside(self):
        r = crossing_search(GRAPHS["T'"], E, x0=0)
        assert math.isfinite(r.gap) and r.gap <= 1e-9

    def test_bad_inputs(self):
        with pytest.raises(GraphError):
            crossing_search(standard_graph("vertex"), K3)
        with pytest.raises(ValueError):
            crossing_search(K3, E, x0=1)
        with pytest.raises(ValueError):
            path_point(Fraction(1, 2), Fraction(0), "zigzag")

    def test_tampered_witness_fails_verification(self):
        r = crossing_search(GRAPHS["T'"], E)
        moved = type(r)(**{**r.__dict__, "weights": two_vertex(1, 0, 1)})
        assert not verify_witness(moved)

    def test_disconnected_patterns_allowed(self):
        F = build_graph(4, [(0, 1), (1, 2), (0, 2)], {0: 0})
        r = crossing_search(pendant(K3, 1), F)
        assert r.gap <= 1e-9
