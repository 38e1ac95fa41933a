"""Staged random sampling of near-complete induced subgraphs.

On a host with ``2rm`` vertices and minimum degree at least
``n - m/2``, the staged process draws an induced subgraph on ``2r``
vertices (one chosen pair per stage) that always contains the spanning
doubled-path-complement pattern: its missing edges sit only inside a
chosen pair or between consecutive pairs.  The pair law within a stage
is non-uniform (``1/m^2`` same-half, ``1/m^3`` cross-half), which is
what keeps every host edge's inclusion probability near ``1/m^2``.

Exact per-member probabilities of this process are not tractable, so
this module offers sampling plus Monte Carlo estimation only; all
outputs here are explicitly approximate (floats), in contrast to the
exact modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .graph import Edge, Graph
from .recursion import partition_doubled_path_complement

def pair_law_normalization(m: int) -> Fraction:
    """Total mass of the stage pair law: 1/m^2 for each same-half pair,
    1/m^3 across halves; 2*C(m,2)/m^2 + m^2/m^3 = (m-1)/m + 1/m = 1."""
    return Fraction(2 * math.comb(m, 2), m**2) + Fraction(m**2, m**3)


def block_size(g: Graph, r: int) -> int:
    """The ``m`` with ``|g| = 2rm``, after checking the preconditions."""
    if r < 1:
        raise ValueError("need r >= 1")
    if g.n == 0 or g.n % (2 * r) != 0:
        raise ValueError(f"host order {g.n} is not a multiple of 2r = {2 * r}")
    m = g.n // (2 * r)
    if m < 2:
        raise ValueError(f"block size m={m} must be at least 2")
    if 2 * g.min_degree() < 2 * g.n - m:
        raise ValueError(
            f"minimum degree {g.min_degree()} below required {g.n} - m/2 = "
            f"{g.n} - {m}/2"
        )
    assert pair_law_normalization(m) == 1
    return m


@dataclass(frozen=True)
class SampleResult:
    """One sampled member: chosen vertices in stage order (consecutive
    entries form the stage pairs) and the induced subgraph on local
    labels following that order."""

    vertices: tuple[int, ...]
    same_half_flags: tuple[int, ...]
    subgraph: Graph

    def missing_local_edges(self) -> list[Edge]:
        two_r = self.subgraph.n
        return [
            (a, b)
            for a in range(two_r)
            for b in range(a + 1, two_r)
            if not self.subgraph.has_edge(a, b)
        ]

    def contains_spanning_pattern(self) -> bool:
        """Missing edges only inside a pair or between consecutive pairs."""
        return all(b // 2 - a // 2 <= 1 for a, b in self.missing_local_edges())


def sample_subgraph(g: Graph, r: int, seed: int, stream: int = 0) -> SampleResult:
    """Draw one induced subgraph on ``2r`` vertices via the staged process."""
    m = block_size(g, r)
    ((chosen, flags),) = kernels.sample_chosen(g, r, m, seed, stream, 1)
    index = {v: i for i, v in enumerate(chosen)}
    edges = [
        (index[u], index[v]) if index[u] < index[v] else (index[v], index[u])
        for i, u in enumerate(chosen)
        for v in chosen[i + 1 :]
        if g.has_edge(u, v)
    ]
    return SampleResult(tuple(chosen), tuple(flags), Graph(2 * r, edges))


def sample_many(g: Graph, r: int, seed: int, nsamples: int, stream: int = 0):
    """Chosen-vertex rows for ``nsamples`` draws (stage order)."""
    m = block_size(g, r)
    return kernels.sample_chosen(g, r, m, seed, stream, nsamples)


@dataclass(frozen=True)
class MarginalEstimates:
    """Monte Carlo edge-inclusion estimates, scaled by ``m^2``."""

    r: int
    m: int
    nsamples: int
    estimates: dict[Edge, tuple[float, float]]  # edge -> (m^2 * p_hat, half-width)
    structure_violations: int
    missing_edges: int

    def worst_edges(self, count: int = 5):
        return sorted(self.estimates.items(), key=lambda kv: kv[1][0])[:count]


def estimate_edge_marginals(
    g: Graph, r: int, nsamples: int, seed: int, stream: int = 0
) -> MarginalEstimates:
    """Scaled Monte Carlo inclusion frequency per host edge.

    The estimate for edge ``e`` is ``m^2`` times the fraction of
    samples whose member contains ``e``; the half-width is three
    binomial standard errors (floating point is acceptable here and
    only here: these are estimates, not certificates).
    """
    if nsamples < 1:
        raise ValueError("need at least one sample")
    m = block_size(g, r)
    counts, _, _, violations, missing = kernels.batch_stats(
        g, r, m, seed, stream, nsamples
    )
    n = g.n
    scale = m * m
    estimates = {}
    for u, v in g.edge_list():
        c = counts[u * (2 * n - u - 1) // 2 + (v - u - 1)]
        p = c / nsamples
        half = 3.0 * scale * math.sqrt(p * (1.0 - p) / nsamples)
        estimates[(u, v)] = (scale * p, half)
    return MarginalEstimates(r, m, nsamples, estimates, violations, missing)


@dataclass(frozen=True)
class ConditionalStats:
    """Inclusion frequencies conditioned on how an edge's endpoints met
    the process (complete hosts only, where every slot pair is an edge).

    ``different_stage`` is an exact rational identity rather than an
    estimate: on a complete host both its numerator and denominator are
    the same in every sample.
    """

    r: int
    m: int
    nsamples: int
    different_stage: Fraction
    same_half: float
    same_half_se: float
    cross_half: float
    cross_half_se: float

    def targets(self) -> tuple[Fraction, Fraction, Fraction]:
        m = self.m
        return Fraction(1, m * m), Fraction(1, m * m), Fraction(1, m**3)


def conditional_pair_stats(
    g: Graph, r: int, nsamples: int, seed: int, stream: int = 0
) -> ConditionalStats:
    """Estimate the three conditional inclusion laws of the pair process.

    Requires a complete host: there the count of same-half stages per
    sample determines all three conditional frequencies, and the
    different-stage law reduces to an exact counting identity.
    """
    m = block_size(g, r)
    if len(g.edges) != g.n * (g.n - 1) // 2:
        raise ValueError("conditional pair statistics require a complete host")
    _, sum_x2, sum_x2sq, violations, missing = kernels.batch_stats(
        g, r, m, seed, stream, nsamples
    )
    if violations or missing:
        raise AssertionError("complete host produced missing edges")

    n = g.n
    # different stages: both counts are deterministic on a complete host
    included = math.comb(2 * r, 2) - r
    slots = math.comb(n, 2) - r * (m * (2 * m - 1))
    different = Fraction(included, slots)

    mean_x2 = sum_x2 / nsamples
    var_x2 = max(sum_x2sq / nsamples - mean_x2**2, 0.0)
    se_x2 = math.sqrt(var_x2 / nsamples)

    same_slots = r * m * (m - 1)  # 2 * C(m, 2) per stage
    cross_slots = r * m * m
    same = mean_x2 / same_slots
    same_se = se_x2 / same_slots
    cross = (r - mean_x2) / cross_slots
    cross_se = se_x2 / cross_slots
    return ConditionalStats(
        r, m, nsamples, different, same, same_se, cross, cross_se
    )


def approx_weighting_via_sampler(
    g: Graph, r_pattern: int, nsamples: int, seed: int, stream: int = 0
) -> dict[tuple[int, ...], float]:
    """Empirical member weighting: each sampled vertex set accumulates
    ``m^2 / nsamples`` per occurrence.

    This is an *approximate* surrogate for the member distribution and
    is suitable for validation dashboards only; it cannot feed the
    exact correction pipeline, whose input interval is a hard
    precondition.
    """
    m = block_size(g, r_pattern)
    rows = kernels.sample_chosen(g, r_pattern, m, seed, stream, nsamples)
    unit = m * m / nsamples
    out: dict[tuple[int, ...], float] = {}
    for chosen, _ in rows:
        key = tuple(sorted(chosen))
        out[key] = out.get(key, 0.0) + unit
    return out


def member_missing_edges_fit_pattern(result: SampleResult) -> bool:
    """The member's missing edges embed into the 5-matching cover of the
    doubled-path complement pattern (pairs in stage order)."""
    r = result.subgraph.n // 2
    partition = partition_doubled_path_complement(r)
    allowed = partition.union()
    return all(e in allowed for e in result.missing_local_edges())
