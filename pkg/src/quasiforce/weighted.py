"""Weighted graphs with loops, their homomorphism densities, and crossing witnesses."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from quasiforce.graphs import GraphError, LabeledGraph, graph_params, is_connected
from quasiforce.homs import Host, exact_array, f_value, hom_sum, log_fraction

WEIGHT_FAMILIES = ("101", "x1x")
ENUMERATION_LIMIT = 1 << 16
DEFAULT_X0 = Fraction(1, 1000)
DEFAULT_TOL = 1e-9
MAX_BISECTION_STEPS = 64
DEFAULT_WAYPOINT = (Fraction(3, 4), Fraction(1, 2), Fraction(1, 4))
ENDPOINT_NUDGE = Fraction(1, 1 << 20)


def _rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric [0, 1] weights on k vertices, loops on the diagonal."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.weights)
        if k == 0:
            raise GraphError("weighted graph needs at least one vertex")
        for i, row in enumerate(self.weights):
            if len(row) != k:
                raise GraphError(f"row {i} has length {len(row)}, expected {k}")
            for j, w in enumerate(row):
                if not 0 <= w <= 1:
                    raise GraphError(f"weight w({i},{j}) = {w} outside [0, 1]")
                if w != self.weights[j][i]:
                    raise GraphError(f"weights not symmetric at ({i},{j})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> WeightedGraph:
        return cls(tuple(tuple(_rational(x) for x in row) for row in rows))

    @property
    def k(self) -> int:
        return len(self.weights)

    def host(self) -> Host:
        k = self.k
        return Host(exact_array(self.weights), exact_array([Fraction(1, k)] * k))

    def float_matrix(self) -> np.ndarray:
        return np.array([[float(w) for w in row] for row in self.weights])

    def diagonal_distance(self) -> Fraction:
        """Largest difference between two weight entries (0 iff w is constant)."""
        flat = [w for row in self.weights for w in row]
        return max(flat) - min(flat)

    def as_dict(self) -> dict:
        return {
            "weights": [[{"num": w.numerator, "den": w.denominator} for w in row] for row in self.weights],
            "weights_float": [[float(w) for w in row] for row in self.weights],
        }

    @classmethod
    def from_dict(cls, data: dict) -> WeightedGraph:
        rows = data["weights"]
        return cls(
            tuple(
                tuple(Fraction(int(w["num"]), int(w["den"])) if isinstance(w, dict) else _rational(w) for w in row)
                for row in rows
            )
        )


def two_vertex(w00, w01, w11) -> WeightedGraph:
    """The array (w(o,o), w(o,b), w(b,b)) as a two-vertex weighted graph."""
    w00, w01, w11 = (_rational(x) for x in (w00, w01, w11))
    return WeightedGraph(((w00, w01), (w01, w11)))


def family_weights(family: str, x=None) -> WeightedGraph:
    if family == "101":
        return two_vertex(1, 0, 1)
    if family == "x1x":
        if x is None:
            raise ValueError("family x1x needs a value for x")
        return two_vertex(x, 1, x)
    raise ValueError(f"unknown weight family {family!r}; expected one of {WEIGHT_FAMILIES}")


@dataclass(frozen=True)
class WeightedDensity:
    t: Fraction
    f: float | None


def _enumerate(F: LabeledGraph, G: WeightedGraph) -> Fraction:
    k, n = G.k, F.vertex_count
    if k**n > ENUMERATION_LIMIT:
        raise GraphError(f"assignment enumeration limited to {ENUMERATION_LIMIT} maps, need {k}^{n}")
    w = G.weights
    total = Fraction(0)
    for phi in product(range(k), repeat=n):
        term = Fraction(1)
        for u, v in F.edges:
            term *= w[phi[u]][phi[v]]
            if not term:
                break
        total += term
    return total / k**n


def weighted_density(F: LabeledGraph, G: WeightedGraph, engine: str = "compose") -> WeightedDensity:
    """Exact t_G(F) and f = t^(1/m); ``engine`` is ``enumerate`` or ``compose``."""
    if engine == "enumerate":
        t = _enumerate(F, G)
    elif engine in ("compose", "auto", "elimination"):
        t = Fraction(hom_sum(F, G.host(), "compose" if engine == "auto" else engine))
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return WeightedDensity(t, f_value(t, F.m))


@dataclass(frozen=True)
class ClosedForm:
    family: str
    f_exponent: Fraction
    t_exponent: Fraction | None
    value: float | None

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "f_exponent": str(self.f_exponent),
            "t_exponent": None if self.t_exponent is None else str(self.t_exponent),
            "value": self.value,
        }


def closed_form_f(F: LabeledGraph, family: str) -> ClosedForm:
    """Closed-form behaviour of f for a connected F.

    ``101``: f = (1/2)^((n-1)/m), returned as that exponent plus the value.
    ``x1x``: f = Theta(x^(1 - b/m)) and t = Theta(x^(m - b)) as x -> 0.
    """
    if not is_connected(F):
        raise GraphError("closed form needs a connected graph")
    if F.m == 0:
        raise GraphError("closed form needs at least one edge")
    p = graph_params(F)
    if family == "101":
        expo = Fraction(p.n - 1, p.m)
        return ClosedForm(family, expo, None, 2.0 ** -float(expo))
    if family == "x1x":
        return ClosedForm(family, 1 - Fraction(p.b, p.m), Fraction(p.m - p.b), None)
    raise ValueError(f"unknown weight family {family!r}; expected one of {WEIGHT_FAMILIES}")


def log_t_slope(F: LabeledGraph, xs: Sequence = (Fraction(1, 10**3), Fraction(1, 10**4), Fraction(1, 10**5))) -> float:
    """Least-squares slope of log t(F, (x,1,x)) against log x."""
    lx = [log_fraction(_rational(x)) for x in xs]
    lt = [log_fraction(weighted_density(F, family_weights("x1x", x)).t) for x in xs]
    return float(np.polyfit(lx, lt, 1)[0])


# ------------------------------------------------------------------ witnesses


class NoCrossingError(RuntimeError):
    """Endpoint signs agree: no crossing is certified on this path.

    This says nothing about whether the pair is forcing.
    """


PATHS = ("detour", "segment")


def path_point(s: Fraction, x0: Fraction, path: str = "detour", waypoint=DEFAULT_WAYPOINT) -> tuple[Fraction, Fraction, Fraction]:
    """Point of the path from (1,0,1) (s=0) to (x0,1,x0) (s=1).

    ``segment`` is the straight line, which meets the constant diagonal at
    s = 1/(2-x0).  ``detour`` runs through ``waypoint`` (reached at s=1/2)
    and, for the default waypoint, stays at distance >= 1/4 from the diagonal.
    """
    start = (Fraction(1), Fraction(0), Fraction(1))
    end = (x0, Fraction(1), x0)
    if path == "segment":
        a, b, u = start, end, s
    elif path == "detour":
        if s <= Fraction(1, 2):
            a, b, u = start, tuple(waypoint), 2 * s
        else:
            a, b, u = tuple(waypoint), end, 2 * s - 1
    else:
        raise ValueError(f"unknown path {path!r}; expected one of {PATHS}")
    return tuple((1 - u) * p + u * q for p, q in zip(a, b))


@dataclass(frozen=True)
class WitnessReport:
    weights: WeightedGraph
    pair: tuple[LabeledGraph, LabeledGraph]
    s: Fraction
    f1: float
    f2: float
    common_f: float
    gap: float  # |log f(F1) - log f(F2)|
    diagonal_distance: Fraction
    path: str
    x0: Fraction
    steps: int

    @property
    def w(self) -> tuple[Fraction, Fraction, Fraction]:
        m = self.weights.weights
        return (m[0][0], m[0][1], m[1][1])

    def as_dict(self) -> dict:
        return {
            **self.weights.as_dict(),
            "s": {"num": self.s.numerator, "den": self.s.denominator},
            "f1": self.f1,
            "f2": self.f2,
            "common_f": self.common_f,
            "log_gap": self.gap,
            "diagonal_distance": float(self.diagonal_distance),
            "path": self.path,
            "x0": str(self.x0),
            "steps": self.steps,
        }


def _log_f(F: LabeledGraph, G: WeightedGraph) -> float:
    t = weighted_density(F, G).t
    if t == 0:
        return -math.inf
    return log_fraction(t) / F.m


def crossing_search(
    F1: LabeledGraph,
    F2: LabeledGraph,
    x0=DEFAULT_X0,
    tol: float = DEFAULT_TOL,
    path: str = "detour",
    waypoint=DEFAULT_WAYPOINT,
    max_steps: int = MAX_BISECTION_STEPS,
) -> WitnessReport:
    """Bisect h(s) = log f(F1) - log f(F2) along the path from (1,0,1) to (x0,1,x0).

    Every probe uses exact rational weights and exact densities; only the
    final log comparison is in binary64.
    """
    if F1.m == 0 or F2.m == 0:
        raise GraphError("crossing search needs graphs with edges")
    x0 = _rational(x0)
    if not 0 <= x0 < 1:
        raise ValueError(f"x0 must lie in [0, 1), got {x0}")

    def h(s: Fraction) -> float:
        G = two_vertex(*path_point(s, x0, path, waypoint))
        return _log_f(F1, G) - _log_f(F2, G)

    lo, hi = Fraction(0), Fraction(1)
    h_lo, h_hi = h(lo), h(hi)
    # t = 0 at an endpoint (x0 = 0 with a non-bipartite graph): step inside
    while math.isinf(h_lo) or math.isnan(h_lo):
        lo += ENDPOINT_NUDGE
        h_lo = h(lo)
    while math.isinf(h_hi) or math.isnan(h_hi):
        hi -= ENDPOINT_NUDGE
        h_hi = h(hi)

    def report(s: Fraction, steps: int) -> WitnessReport:
        G = two_vertex(*path_point(s, x0, path, waypoint))
        l1, l2 = _log_f(F1, G), _log_f(F2, G)
        f1, f2 = math.exp(l1), math.exp(l2)
        return WitnessReport(
            weights=G,
            pair=(F1, F2),
            s=s,
            f1=f1,
            f2=f2,
            common_f=math.exp((l1 + l2) / 2),
            gap=abs(l1 - l2),
            diagonal_distance=G.diagonal_distance(),
            path=path,
            x0=x0,
            steps=steps,
        )

    if h_lo == 0:
        return report(lo, 0)
    if h_hi == 0:
        return report(hi, 0)
    if (h_lo < 0) == (h_hi < 0):
        raise NoCrossingError(
            f"no crossing certified on this path: h(0) = {h_lo:.6g}, h(1) = {h_hi:.6g} have the same sign"
        )
    best = (abs(h_lo), lo) if abs(h_lo) < abs(h_hi) else (abs(h_hi), hi)
    steps = 0
    while best[0] > tol and steps < max_steps:
        steps += 1
        mid = (lo + hi) / 2
        h_mid = h(mid)
        best = min(best, (abs(h_mid), mid))
        if h_mid == 0:
            break
        if (h_mid < 0) == (h_lo < 0):
            lo, h_lo = mid, h_mid
        else:
            hi, h_hi = mid, h_mid
    result = report(best[1], steps)
    if result.gap > tol:
        raise NoCrossingError(f"bisection stopped after {steps} steps with log gap {result.gap:.3g} > {tol:.3g}")
    return result


def verify_witness(report: WitnessReport, tol: float = DEFAULT_TOL) -> bool:
    """Recompute both densities at the witness weights and re-check the gap."""
    F1, F2 = report.pair
    gap = abs(_log_f(F1, report.weights) - _log_f(F2, report.weights))
    return gap <= tol and report.weights.diagonal_distance() == report.diagonal_distance
