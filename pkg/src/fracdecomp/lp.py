"""Independent exact-rational LP feasibility oracle.

This is the ground truth the constructive modules are checked against:
a phase-1 simplex over exact rationals (no floating point, no
rounding), with Bland's rule as the anti-cycling safeguard.  Feasible
answers come back as verified clique weightings; infeasible answers
come back with an exact Farkas-style certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .graph import (
    Clique,
    CliqueWeighting,
    Edge,
    Graph,
    _as_target_fn,
    enumerate_cliques,
    verify_weighting,
)
from .rational import ONE, ZERO, rat


class BudgetExceeded(RuntimeError):
    """The instance is larger than the configured variable budget."""


@dataclass(frozen=True)
class FarkasCertificate:
    """Rational edge multipliers proving infeasibility: every clique's
    edges sum to <= 0 while the target-weighted total is > 0."""

    y: Mapping[Edge, object]

    def check(self, cliques, target_fn) -> bool:
        for clique in cliques:
            total = sum(
                (self.y.get((u, v), ZERO) for u, v in combinations(clique, 2)),
                start=ZERO,
            )
            if total > 0:
                return False
        paid = sum(
            (value * target_fn(e) for e, value in self.y.items()), start=ZERO
        )
        return paid > 0


@dataclass
class LpOutcome:
    feasible: bool
    weighting: CliqueWeighting | None = None
    certificate: FarkasCertificate | None = None
    witness_edges: list[Edge] = field(default_factory=list)
    detail: str = ""


# -- dense exact phase-1 simplex ----------------------------------------

_DEGENERATE_SWITCH = 12  # consecutive degenerate pivots before Bland's rule


def _pivot(rows, rhs, cost, p, q):
    prow = rows[p]
    piv = prow[q]
    if piv != 1:
        inv = ONE / piv
        rows[p] = prow = [a * inv for a in prow]
        rhs[p] = rhs[p] * inv
    prhs = rhs[p]
    for i in range(len(rows)):
        if i == p:
            continue
        f = rows[i][q]
        if f:
            row = rows[i]
            rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
            rhs[i] -= f * prhs
    f = cost[q]
    if f:
        cost[:] = [a - f * b if b else a for a, b in zip(cost, prow)]
    return prhs


def _run_phase1(rows, rhs, ncols, basis, artificial_cols):
    """Phase-1 driver; returns (objective, cost_row)."""
    m = len(rows)
    art = set(artificial_cols)
    cost = [ZERO] * ncols
    obj = ZERO
    for i in range(m):
        if basis[i] in art:
            row = rows[i]
            for j in range(ncols):
                if row[j]:
                    cost[j] -= row[j]
            obj += rhs[i]
    for j in artificial_cols:
        cost[j] += ONE

    degenerate_streak = 0
    while True:
        enter = -1
        if degenerate_streak >= _DEGENERATE_SWITCH:
            for j in range(ncols):
                if cost[j] < 0:
                    enter = j
                    break
        else:
            best = ZERO
            for j in range(ncols):
                if cost[j] < best:
                    best = cost[j]
                    enter = j
        if enter < 0:
            return obj, cost

        leave = -1
        best_ratio = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            raise AssertionError("phase-1 objective unbounded below")
        degenerate_streak = degenerate_streak + 1 if best_ratio == 0 else 0

        gain = cost[enter] * best_ratio  # negative cost times step
        _pivot(rows, rhs, cost, leave, enter)
        obj += gain
        basis[leave] = enter


# -- public oracle operations -------------------------------------------


def lp_feasible(g: Graph, r: int, target=None, max_variables: int = 10**6) -> LpOutcome:
    """Exact feasibility of "weight the ``r``-cliques of ``g`` so every
    edge ``e`` carries total weight ``target(e)``" (default target 1).

    Returns a verified weighting, or an exact Farkas certificate
    (edge multipliers ``y`` with every clique's edge sum <= 0 and
    positive total against the target).
    """
    target_fn = _as_target_fn(target)
    cliques = enumerate_cliques(g, r) if g.n >= r else []
    if len(cliques) > max_variables:
        raise BudgetExceeded(
            f"{len(cliques)} clique variables exceed budget {max_variables}"
        )
    edges = g.edge_list()
    b = []
    for e in edges:
        value = rat(target_fn(e))
        if value < 0:
            raise ValueError(f"negative target on edge {e}")
        b.append(value)

    covered: dict[Edge, bool] = {e: False for e in edges}
    for clique in cliques:
        for e in combinations(clique, 2):
            covered[e] = True
    for e, value in zip(edges, b):
        if value > 0 and not covered[e]:
            cert = FarkasCertificate({e: ONE})
            assert cert.check(cliques, target_fn)
            return LpOutcome(
                feasible=False,
                certificate=cert,
                witness_edges=[e],
                detail=f"edge {e[0]}-{e[1]} lies in no clique of order {r}",
            )

    nvars = len(cliques)
    m = len(edges)
    ncols = nvars + m
    edge_index = {e: i for i, e in enumerate(edges)}
    rows = [[ZERO] * ncols for _ in range(m)]
    rhs = list(b)
    for j, clique in enumerate(cliques):
        for e in combinations(clique, 2):
            rows[edge_index[e]][j] = ONE
    artificial_cols = list(range(nvars, nvars + m))
    for i in range(m):
        rows[i][artificial_cols[i]] = ONE
    basis = artificial_cols.copy()

    obj, cost = _run_phase1(rows, rhs, ncols, basis, artificial_cols)

    if obj == 0:
        weights: dict[Clique, object] = {}
        for i, col in enumerate(basis):
            if col < nvars and rhs[i] != 0:
                weights[cliques[col]] = rhs[i]
        weighting = CliqueWeighting(r, weights)
        report = verify_weighting(g, weighting, target)
        if not report.ok:
            raise AssertionError(
                "internal error: simplex solution failed exact verification"
            )
        return LpOutcome(feasible=True, weighting=weighting)

    # duals from the artificial reduced costs: y_i = 1 - cost[artificial_i]
    y = {}
    witnesses = []
    for i, e in enumerate(edges):
        value = ONE - cost[artificial_cols[i]]
        if value != 0:
            y[e] = value
        if value > 0:
            witnesses.append(e)
    cert = FarkasCertificate(y)
    if not cert.check(cliques, target_fn):
        raise AssertionError("internal error: invalid infeasibility certificate")
    return LpOutcome(
        feasible=False,
        certificate=cert,
        witness_edges=witnesses,
        detail="no non-negative clique weighting meets the edge targets",
    )


def lp_approx_weighting(g: Graph, r: int, max_variables: int = 10**6) -> LpOutcome:
    """Find order-``2r+2`` clique weights whose edge sums all lie in
    ``[1 - 1/(2r+1), 1]`` (any point of the slab; pure feasibility).

    The output feeds :func:`fracdecomp.correction.lift_to_exact`.
    Infeasibility is reported with the offending edges; an edge
    contained in no clique of order ``2r + 2`` makes the slab
    unreachable outright.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    order = 2 * r + 2
    lo = ONE - rat(1, 2 * r + 1)
    if g.n < order:
        return LpOutcome(
            feasible=False,
            detail=f"host has {g.n} < {order} vertices",
            witness_edges=g.edge_list()[:1],
        )
    cliques = enumerate_cliques(g, order)
    if len(cliques) > max_variables:
        raise BudgetExceeded(
            f"{len(cliques)} clique variables exceed budget {max_variables}"
        )
    edges = g.edge_list()

    covered = {e: False for e in edges}
    for clique in cliques:
        for e in combinations(clique, 2):
            covered[e] = True
    bare = [e for e in edges if not covered[e]]
    if bare:
        return LpOutcome(
            feasible=False,
            witness_edges=bare,
            detail=(
                f"{len(bare)} edge(s) lie in no clique of order {order}, "
                f"e.g. {bare[0][0]}-{bare[0][1]}"
            ),
        )

    nvars = len(cliques)
    m = len(edges)
    # columns: cliques | lower slacks | upper slacks | artificials (lower rows)
    ncols = nvars + 2 * m + m
    rows = []
    rhs = []
    basis = []
    for i, e in enumerate(edges):
        row_lo = [ZERO] * ncols
        row_lo[nvars + i] = -ONE
        row_lo[nvars + 2 * m + i] = ONE
        rows.append(row_lo)
        rhs.append(lo)
        basis.append(nvars + 2 * m + i)

        row_up = [ZERO] * ncols
        row_up[nvars + m + i] = ONE
        rows.append(row_up)
        rhs.append(ONE)
        basis.append(nvars + m + i)
    edge_index = {e: i for i, e in enumerate(edges)}
    for j, clique in enumerate(cliques):
        for e in combinations(clique, 2):
            i = edge_index[e]
            rows[2 * i][j] = ONE
            rows[2 * i + 1][j] = ONE

    artificial_cols = [nvars + 2 * m + i for i in range(m)]
    obj, cost = _run_phase1(rows, rhs, ncols, basis, artificial_cols)

    if obj != 0:
        witnesses = []
        for i, e in enumerate(edges):
            if ONE - cost[artificial_cols[i]] > 0:
                witnesses.append(e)
        return LpOutcome(
            feasible=False,
            witness_edges=witnesses,
            detail="no clique weighting reaches the required edge-sum interval",
        )

    weights: dict[Clique, object] = {}
    for i, col in enumerate(basis):
        if col < nvars and rhs[i] != 0:
            weights[cliques[col]] = rhs[i]
    weighting = CliqueWeighting(order, weights)
    sums = weighting.edge_sums()
    for e in edges:
        s = sums.get(e, ZERO)
        if s < lo or s > ONE:
            raise AssertionError("internal error: slab solution out of range")
    return LpOutcome(feasible=True, weighting=weighting)
