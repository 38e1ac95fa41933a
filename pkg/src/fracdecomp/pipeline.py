"""End-to-end decomposition pipeline at desk scale.

The exact route composes: optional blow-up, an order-``2r+2`` slab
weighting (LP feasibility), the exact per-clique correction lift, and
the projection back through the blow-up.  Hosts whose complement is a
matching take the closed-form route directly (their slab LP is
typically infeasible at small sizes because cliques of order ``2r+2``
need not exist, while the closed form always applies).

The validate route runs the staged sampler and reports how close the
empirical member weighting comes to the interval the exact lift would
require; it never claims exactness.

The minimum-degree gate is reported with its exact rational margin.
At desk scale virtually no interesting host passes the literal
threshold (even complete graphs need ``n >= 100 r``), so by default a
failing gate is recorded as a warning rather than an error; strict
mode enforces it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Literal

from .correction import SlabViolation, lift_to_exact
from .graph import (
    Clique,
    CliqueWeighting,
    Graph,
    blow_up,
    verify_weighting,
)
from .kminusm import decompose_clique_minus_matching
from .lp import lp_approx_weighting, lp_feasible
from .rational import ONE, ZERO, rat
from .sampler import estimate_edge_marginals


class PipelineError(RuntimeError):
    """A named, distinct pipeline failure."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@dataclass(frozen=True)
class GateReport:
    passed: bool
    bound_kind: str
    threshold: object  # exact rational fraction of |g|
    min_degree: int
    margin: object  # exact: delta(g) - threshold * n

    def describe(self) -> str:
        state = "pass" if self.passed else "fail"
        return (
            f"degree gate [{self.bound_kind}] {state}: min degree "
            f"{self.min_degree}, required {self.threshold} of n, margin {self.margin}"
        )


def degree_gate(g: Graph, r: int, bound_kind: str = "100r") -> GateReport:
    """Exact comparison of the minimum degree against the threshold.

    ``bound_kind`` is ``"100r"`` (threshold ``1 - 1/(100r)``) or
    ``"128r+252"`` (threshold ``1 - 1/(128r + 252)``).
    """
    if bound_kind == "100r":
        threshold = ONE - rat(1, 100 * r)
    elif bound_kind == "128r+252":
        threshold = ONE - rat(1, 128 * r + 252)
    else:
        raise ValueError(f"unknown bound kind {bound_kind!r}")
    delta = g.min_degree()
    margin = rat(delta) - threshold * g.n
    return GateReport(margin >= 0, bound_kind, threshold, delta, margin)


@dataclass
class PipelineConfig:
    r: int
    mode: Literal["exact", "validate"] = "exact"
    blow_up_factor: int | None = None  # None: no blow-up
    gate: Literal["warn", "strict", "skip"] = "warn"
    bound_kind: str = "100r"
    strategy: Literal["auto", "lp"] = "auto"  # auto: closed form when the
    # complement is a matching (always applicable there, and the slab LP
    # need not even be feasible at small sizes); lp: force slab + lift
    seed: int = 0
    samples: int = 100_000
    pattern_size: int | None = None  # validate mode; default 18r + 26
    max_variables: int = 10**6

    def __post_init__(self):
        if self.r < 3:
            raise ValueError("clique order must be at least 3")
        if self.blow_up_factor is not None and self.blow_up_factor < 1:
            raise ValueError("blow-up factor must be >= 1")


@dataclass
class PipelineResult:
    status: Literal["exact", "validated", "failed"]
    weighting: CliqueWeighting | None
    provenance: list[dict] = field(default_factory=list)
    clique_sources: dict[Clique, str] = field(default_factory=dict)
    report: dict = field(default_factory=dict)


def _is_matching_complement(g: Graph) -> frozenset | None:
    missing = g.complement().edges
    seen: set[int] = set()
    for u, v in missing:
        if u in seen or v in seen:
            return None
        seen.update((u, v))
    return missing


def project_weighting(
    w: CliqueWeighting, projection: list[int], t: int, original: Graph
) -> CliqueWeighting:
    """Push a weighting on a blow-up down to the original graph:
    ``w_K = (1/t^2) * sum over cliques projecting onto K``.

    Every clique of the blow-up projects to distinct originals (copies
    of one vertex are never adjacent), which is asserted here.
    """
    factor = rat(1, t * t)
    acc: dict[Clique, object] = {}
    for clique, value in w.weights.items():
        image = tuple(sorted(projection[v] for v in clique))
        if len(set(image)) != len(image):
            raise AssertionError("blow-up clique projects onto repeated vertices")
        if not original.is_clique(image):
            raise AssertionError("projection image is not a clique of the original")
        acc[image] = acc.get(image, ZERO) + factor * value
    return CliqueWeighting(w.r, acc)


def run_pipeline(g: Graph, cfg: PipelineConfig) -> PipelineResult:
    """Decompose ``g`` (mode ``exact``) or statistically validate the
    sampler's weighting on it (mode ``validate``).

    Exact mode either returns a weighting that passed the exact
    verifier or raises / marks the run failed -- there is no silent
    approximation.  Failures carry a distinct stage name: ``gate``,
    ``lp-infeasible``, ``budget``, ``verify``.
    """
    t_start = time.perf_counter()
    result = PipelineResult(status="failed", weighting=None)
    r = cfg.r

    gate = degree_gate(g, r, cfg.bound_kind)
    if cfg.gate != "skip":
        result.provenance.append({"stage": "degree-gate", "detail": gate.describe()})
        if not gate.passed and cfg.gate == "strict":
            raise PipelineError("gate", gate.describe())

    if cfg.mode == "validate":
        return _run_validate(g, cfg, result, t_start)

    work = g
    projection = None
    t = cfg.blow_up_factor or 1
    if t > 1:
        work, projection = blow_up(g, t)
        result.provenance.append(
            {"stage": "blow-up", "detail": f"factor {t}: {g.n} -> {work.n} vertices"}
        )

    matching = _is_matching_complement(work)
    if cfg.strategy == "lp":
        matching = None
    if matching is not None and work.n >= 2 * r + 2:
        weighting = decompose_clique_minus_matching(r, work.n, matching)
        source = f"matching-complement closed form (|M|={len(matching)})"
        result.provenance.append(
            {
                "stage": "matching-complement",
                "detail": f"complement is a matching of {len(matching)} edges; "
                "closed-form construction applied",
            }
        )
    else:
        outcome = lp_approx_weighting(work, r, max_variables=cfg.max_variables)
        if not outcome.feasible:
            raise PipelineError(
                "lp-infeasible",
                f"no order-{2 * r + 2} weighting reaches the interval: {outcome.detail}",
            )
        result.provenance.append(
            {
                "stage": "slab-lp",
                "detail": f"order-{2 * r + 2} weighting on "
                f"{outcome.weighting.support_size()} cliques",
            }
        )
        try:
            weighting = lift_to_exact(work, outcome.weighting, r)
        except SlabViolation as exc:  # pragma: no cover - LP already enforces
            raise PipelineError("lift", str(exc))
        source = "slab-lp + per-clique corrective shaping"
        result.provenance.append(
            {"stage": "lift", "detail": "per-clique corrective shaping applied"}
        )

    if projection is not None:
        weighting = project_weighting(weighting, projection, t, g)
        source += f" + projection (1/t^2, t={t})"
        result.provenance.append(
            {"stage": "project", "detail": f"pushed down by 1/{t * t}"}
        )

    report = verify_weighting(g, weighting, 1)
    if not report.ok:
        raise PipelineError(
            "verify", "; ".join(report.residual_summary()[:5]) or "unknown mismatch"
        )
    result.status = "exact"
    result.weighting = weighting
    result.clique_sources = {clique: source for clique in weighting.weights}
    result.provenance.append(
        {
            "stage": "verify",
            "detail": f"exact pass on {report.checked_edges} edges",
        }
    )
    result.report = {
        "verdict": "pass",
        "mode": "exact",
        "edges": report.checked_edges,
        "support": weighting.support_size(),
        "seconds": round(time.perf_counter() - t_start, 3),
    }
    return result


def _run_validate(g, cfg, result, t_start):
    r = cfg.r
    pattern = cfg.pattern_size or (18 * r + 26)
    if g.n % (2 * pattern) != 0:
        raise PipelineError(
            "budget",
            f"host order {g.n} is not a multiple of 2*pattern = {2 * pattern}; "
            "choose pattern_size accordingly",
        )
    estimates = estimate_edge_marginals(g, pattern, cfg.samples, cfg.seed)
    lo = 1.0 - 1.0 / (2 * r + 1)
    worst_low = min(v for v, _ in estimates.estimates.values())
    worst_high = max(v for v, _ in estimates.estimates.values())
    slab_ok = all(
        value >= lo - half and value <= 1.0 + half
        for value, half in estimates.estimates.values()
    )
    result.status = "validated"
    result.provenance.append(
        {
            "stage": "sampler",
            "detail": f"pattern {pattern}, {cfg.samples} samples, "
            f"scaled marginals in [{worst_low:.4f}, {worst_high:.4f}]",
        }
    )
    result.report = {
        "verdict": "pass" if slab_ok else "fail",
        "mode": "validate",
        "approximate": True,
        "pattern_size": pattern,
        "samples": cfg.samples,
        "required_lower": lo,
        "observed": [worst_low, worst_high],
        "structure_violations": estimates.structure_violations,
        "seconds": round(time.perf_counter() - t_start, 3),
    }
    return result


def confirm_with_oracle(g: Graph, weighting: CliqueWeighting, target=None) -> bool:
    """Cross-check a constructive result against the LP oracle."""
    outcome = lp_feasible(g, weighting.r, target)
    return outcome.feasible
