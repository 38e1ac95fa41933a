"""Weight shaping on small complete graphs and the exact lift.

``shape_weights`` hits an arbitrary per-edge target function
``f: E(K_{2r+2}) -> [1 - 1/(2r+1), 1]`` exactly, by writing the target
as a combination of decompositions of the complete graph minus
matching prefixes of a one-factorization.  ``lift_to_exact`` uses it
per clique to turn any order-``2r+2`` weighting whose edge sums lie in
the same interval into an exact fractional ``r``-clique decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .graph import Clique, CliqueWeighting, Edge, Graph, edge_key
from .kminusm import decompose_clique_minus_matching
from .rational import ONE, ZERO, rat


@dataclass(frozen=True)
class OneFactorization:
    """Partition of the edges of a complete graph on an even number of
    vertices into perfect matchings."""

    n: int
    matchings: tuple[tuple[Edge, ...], ...]


def one_factorize(r: int) -> OneFactorization:
    """Circle-method one-factorization of the complete graph on
    ``2r + 2`` vertices: ``2r + 1`` perfect matchings of ``r + 1``
    edges each.

    Vertices ``0 .. 2r`` sit on a circle with ``2r + 1`` as hub;
    matching ``i`` pairs the hub with ``i`` and pairs
    ``(i - j) mod (2r+1)`` with ``(i + j) mod (2r+1)``.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    n = 2 * r + 2
    mod = 2 * r + 1
    matchings = []
    for i in range(mod):
        edges = [edge_key(i, n - 1)]
        for j in range(1, r + 1):
            edges.append(edge_key((i - j) % mod, (i + j) % mod))
        matchings.append(tuple(sorted(edges)))
    fact = OneFactorization(n, tuple(matchings))
    covered = {e for m in fact.matchings for e in m}
    if len(covered) != n * (n - 1) // 2:
        raise AssertionError("one-factorization does not partition the edge set")
    return fact


def _validate_targets(r: int, f: Mapping[Edge, object]) -> dict[Edge, object]:
    n = 2 * r + 2
    lo = ONE - rat(1, 2 * r + 1)
    out = {}
    for u, v in combinations(range(n), 2):
        e = (u, v)
        if e not in f:
            raise ValueError(f"edge target missing for {e}")
        value = f[e]
        if value < lo or value > ONE:
            raise ValueError(
                f"target {value} on edge {e} outside [{lo}, 1]"
            )
        out[e] = value
    return out


def matching_prefix_weights(
    r: int, f: Mapping[Edge, object]
) -> dict[tuple[Edge, ...], object]:
    """Weights on the matchings used by :func:`shape_weights`.

    Each one-factor is sorted by target value (ties broken by canonical
    edge order); its prefixes get the consecutive target differences, a
    top-off of ``1 - f(last)``, and the empty matching gets whatever
    keeps the total at 1.  All weights are non-negative exactly when
    ``f`` stays in the admissible interval.
    """
    targets = _validate_targets(r, f)
    fact = one_factorize(r)
    weights: dict[tuple[Edge, ...], object] = {}
    slack = ZERO
    for matching in fact.matchings:
        ordered = sorted(matching, key=lambda e: (targets[e], e))
        for j in range(len(ordered) - 1):
            w = targets[ordered[j + 1]] - targets[ordered[j]]
            if w != 0:
                weights[tuple(ordered[: j + 1])] = w
        top = ONE - targets[ordered[-1]]
        if top != 0:
            weights[tuple(ordered)] = top
        slack += ONE - targets[ordered[0]]
    w_empty = ONE - slack
    if w_empty < 0:
        raise ValueError(
            f"targets are too small: empty-matching weight {w_empty} < 0"
        )
    weights[()] = w_empty
    return weights


def shape_weights(r: int, f: Mapping[Edge, object]) -> CliqueWeighting:
    """Non-negative ``r``-clique weights on the complete graph with
    ``2r + 2`` vertices whose edge sums equal ``f`` exactly.

    ``f`` must assign every edge a rational in
    ``[1 - 1/(2r+1), 1]``; edges are canonical ``(min, max)`` pairs
    over vertices ``0 .. 2r+1``.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    prefix_weights = matching_prefix_weights(r, f)
    acc: dict[Clique, object] = {}
    k = 2 * r + 2
    for matching, w in prefix_weights.items():
        if w == 0:
            continue
        part = decompose_clique_minus_matching(r, k, matching)
        for clique, wk in part.weights.items():
            acc[clique] = acc.get(clique, ZERO) + w * wk
    return CliqueWeighting(r, acc)


class SlabViolation(ValueError):
    """An edge sum falls outside the interval the lift requires."""

    def __init__(self, violations):
        self.violations = violations
        lines = ", ".join(
            f"{u}-{v}: sum {s} outside [{lo}, 1]" for (u, v), s, lo in violations[:5]
        )
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        super().__init__(f"edge sums violate the required interval: {lines}{more}")


def lift_to_exact(g: Graph, w22: CliqueWeighting, r: int) -> CliqueWeighting:
    """Turn an approximate order-``2r+2`` weighting into an exact
    fractional ``r``-clique decomposition of ``g``.

    Requires every edge sum ``S(e)`` of ``w22`` over the edges of ``g``
    to lie in ``[1 - 1/(2r+1), 1]``.  Each supported clique is
    re-decomposed with per-edge targets ``1/z_e`` where
    ``z_e = (1 + 1/(2r)) * S(e)``, which rescales every edge sum to
    exactly 1.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    if w22.r != 2 * r + 2:
        raise ValueError(f"expected weights on cliques of order {2 * r + 2}")
    lo = ONE - rat(1, 2 * r + 1)
    sums = w22.edge_sums()
    violations = []
    for e in g.edge_list():
        s = sums.get(e, ZERO)
        if s < lo or s > ONE:
            violations.append((e, s, lo))
    if violations:
        raise SlabViolation(violations)

    scale = ONE + rat(1, 2 * r)
    inv_z = {e: ONE / (scale * sums[e]) for e in g.edge_list()}
    acc: dict[Clique, object] = {}
    for clique, w in w22.weights.items():
        if w == 0:
            continue
        targets = {
            (i, j): inv_z[edge_key(clique[i], clique[j])]
            for i, j in combinations(range(len(clique)), 2)
        }
        local = shape_weights(r, targets)
        factor = scale * w
        for small, ws in local.weights.items():
            key = tuple(sorted(clique[i] for i in small))
            acc[key] = acc.get(key, ZERO) + factor * ws
    return CliqueWeighting(r, acc)
