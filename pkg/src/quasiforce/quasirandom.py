"""W-random sampling, the quasirandomness battery, and the Jensen-gap audit."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from quasiforce.graphs import LabeledGraph
from quasiforce.weighted import WeightedGraph

MAX_SPECTRUM_N = 2000
DEFAULT_SUBSET_TRIALS = 200

# Finite-n envelope for a quasirandom host at n ~ 500 (positive control).
LAMBDA2_ENVELOPE = 0.15
C4_GAP_ENVELOPE = 0.02


@dataclass(frozen=True)
class SampleConfig:
    n: int
    seed: int
    source: WeightedGraph

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"sample size must be positive, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class WRandomGraph:
    graph: LabeledGraph
    assignment: tuple[int, ...]  # host vertex -> weighted-graph vertex


def sample_w_random(config: SampleConfig) -> WRandomGraph:
    """Sample G_n from a weighted graph with loops.

    Streams: ``SeedSequence(seed).spawn(2)`` feeds two PCG64 generators; the
    first draws the vertex assignment, the second one uniform per pair
    (i < j) in row-major order, and i~j iff that uniform is below
    w(phi(i), phi(j)).
    """
    n, k = config.n, config.source.k
    assign_ss, edge_ss = np.random.SeedSequence(config.seed).spawn(2)
    phi = np.random.Generator(np.random.PCG64(assign_ss)).integers(0, k, size=n)
    rows, cols = np.triu_indices(n, 1)
    u = np.random.Generator(np.random.PCG64(edge_ss)).random(len(rows))
    W = config.source.float_matrix()
    hit = u < W[phi[rows], phi[cols]]
    edges = tuple(zip(rows[hit].tolist(), cols[hit].tolist()))
    return WRandomGraph(LabeledGraph(n, edges), tuple(phi.tolist()))


def gnp(n: int, p, seed: int) -> LabeledGraph:
    """G(n, p) as the W-random graph of the one-vertex weighted graph (p)."""
    return sample_w_random(SampleConfig(n, seed, WeightedGraph.from_rows([[p]]))).graph


@dataclass(frozen=True)
class QuasiReport:
    n: int
    p: float
    p_hat: float
    p1_max_dev: float
    lambda1_over_n: float
    lambda2_abs_over_n: float
    t_c4: float
    c4_gap: float
    subset_trials: int

    @property
    def flagged(self) -> bool:
        """True when the host falls outside the quasirandom envelope."""
        return self.lambda2_abs_over_n > LAMBDA2_ENVELOPE or self.c4_gap > C4_GAP_ENVELOPE

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "p_hat": self.p_hat,
            "p1_max_dev": self.p1_max_dev,
            "p1_note": f"max over {self.subset_trials} random subsets of size floor(n/2), not over all subsets",
            "lambda1_over_n": self.lambda1_over_n,
            "lambda2_abs_over_n": self.lambda2_abs_over_n,
            "t_c4": self.t_c4,
            "c4_gap": self.c4_gap,
            "flagged_non_quasirandom": self.flagged,
        }


def quasirandom_battery(
    G: LabeledGraph, p: float, subset_trials: int = DEFAULT_SUBSET_TRIALS, seed: int = 0
) -> QuasiReport:
    """Subset densities (sampled), full spectrum, and exact e/C4 densities.

    ``p_hat`` is hom(e, G)/n^2 and ``t_c4`` is hom(C4, G)/n^4; both counts are
    exact integers (trace of A^2 and A^4).
    """
    n = G.vertex_count
    if n < 4:
        raise ValueError(f"battery needs at least 4 vertices, got {n}")
    if n > MAX_SPECTRUM_N:
        raise ValueError(f"dense spectrum limited to n <= {MAX_SPECTRUM_N}, got {n}")
    A = G.adjacency_matrix()

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    size = n // 2
    target = p * size * (size - 1) / 2
    worst = 0.0
    for _ in range(subset_trials):
        U = rng.choice(n, size=size, replace=False)
        inside = int(A[np.ix_(U, U)].sum()) // 2
        worst = max(worst, abs(inside - target) / n**2)

    try:
        eig = np.linalg.eigvalsh(A.astype(float))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition failed: {exc}") from exc
    lam1 = float(eig[-1])
    rest = float(np.abs(eig[:-1]).max()) if n > 1 else 0.0

    hom_e = int(A.sum())
    A2 = A @ A
    hom_c4 = int((A2 * A2).sum())
    p_hat = Fraction(hom_e, n**2)
    t_c4 = Fraction(hom_c4, n**4)
    return QuasiReport(
        n=n,
        p=float(p),
        p_hat=float(p_hat),
        p1_max_dev=worst,
        lambda1_over_n=lam1 / n,
        lambda2_abs_over_n=rest / n,
        t_c4=float(t_c4),
        c4_gap=float(abs(t_c4 - p_hat**4)),
        subset_trials=subset_trials,
    )


def limit_spectrum(source: WeightedGraph) -> list[float]:
    """Eigenvalues of the step-function kernel, i.e. the limits of lambda_i / n."""
    k = source.k
    return sorted(np.linalg.eigvalsh(source.float_matrix() / k).tolist(), reverse=True)


# ------------------------------------------------------------------ Jensen audit


@dataclass(frozen=True)
class JensenInstance:
    weights: tuple
    values: tuple
    target: object
    power: int
    delta: object

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.values):
            raise ValueError("weights and values differ in length")
        if any(w < 0 for w in self.weights) or any(a < 0 for a in self.values):
            raise ValueError("weights and values must be non-negative")
        total = sum(self.weights)
        exact = all(isinstance(w, (int, Fraction)) for w in self.weights)
        if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
            raise ValueError(f"weights sum to {total}, not 1")
        if self.target <= 0:
            raise ValueError(f"target A must be positive, got {self.target}")
        if self.power < 2:
            raise ValueError(f"power k must be at least 2, got {self.power}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


@dataclass(frozen=True)
class JensenAudit:
    epsilon: object
    bad_weight: object
    hypothesis_active: bool  # delta^3 > 3 epsilon
    consistent: bool


def jensen_audit(inst: JensenInstance) -> JensenAudit:
    """Smallest epsilon meeting both moment hypotheses, and the weight of the bad set.

    The instance is consistent with the Jensen-gap bound iff delta^3 > 3 epsilon implies
    bad_weight <= delta.  For k > 2 the k-th moment bound transfers to the
    second moment with the same epsilon, so the k = 2 constant applies.
    Exact when the inputs are ints/Fractions.
    """
    A, k, delta = inst.target, inst.power, inst.delta
    mean = sum(p * a for p, a in zip(inst.weights, inst.values))
    moment = sum(p * a**k for p, a in zip(inst.weights, inst.values))
    epsilon = max(1 - mean / A, moment / A**k - 1, 0)
    bad = sum(p for p, a in zip(inst.weights, inst.values) if abs(a - A) >= delta * A)
    active = delta**3 > 3 * epsilon
    return JensenAudit(epsilon, bad, active, (not active) or bad <= delta)


def random_jensen_instance(rng: np.random.Generator, max_len: int = 50) -> JensenInstance:
    """A random exact instance, biased toward near-equality in Jensen's inequality."""
    size = int(rng.integers(1, max_len + 1))
    raw = rng.integers(1, 1000, size=size)
    weights = [Fraction(int(r), int(raw.sum())) for r in raw]
    A = Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 20)))
    spread = Fraction(1, int(rng.choice([2, 10, 100, 1000, 10**5])))
    values = []
    for _ in range(size):
        if rng.random() < 0.1:
            values.append(A * Fraction(int(rng.integers(0, 300)), 100))
        else:
            jitter = Fraction(int(rng.integers(-1000, 1001)), 1000) * spread
            values.append(max(Fraction(0), A * (1 + jitter)))
    delta = Fraction(int(rng.integers(1, 100)), 100)
    return JensenInstance(tuple(weights), tuple(values), A, int(rng.integers(2, 5)), delta)


def jensen_sweep(trials: int, seed: int, powers: Sequence[int] = (2, 3, 4)) -> dict:
    rng = np.random.Generator(np.random.PCG64(seed))
    active = violations = 0
    examples = []
    for i in range(trials):
        inst = random_jensen_instance(rng)
        inst = JensenInstance(inst.weights, inst.values, inst.target, powers[i % len(powers)], inst.delta)
        audit = jensen_audit(inst)
        active += audit.hypothesis_active
        if not audit.consistent:
            violations += 1
            examples.append(inst)
    return {"trials": trials, "hypothesis_active": active, "violations": violations, "examples": examples}
