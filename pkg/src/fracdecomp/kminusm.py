"""Exact fractional decomposition of a complete graph minus a matching.

For a complete graph on ``k >= 2r + 2`` vertices with a matching ``M``
removed, the ``r``-cliques are weighted so that every remaining edge
carries total weight exactly 1.  With ``A`` the set of matched
vertices, both edges and cliques fall into symmetry classes indexed by
how many vertices they have in ``A``; the construction assigns one
weight per clique class so that a small exact linear system over the
edge classes is satisfied, then spreads each class total uniformly.

All weights are exact rationals and the class system's residual is
asserted to be identically zero at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping

from .graph import Clique, CliqueWeighting, Edge, validate_matching
from .rational import ONE, ZERO, rat

# -- edge and clique symmetry classes ----------------------------------


def edge_type_counts(r: int, m: int) -> tuple[int, int, int]:
    """Edge counts ``(|E_0|, |E_1|, |E_2|)`` on ``2r + 2`` vertices.

    ``E_i`` is the set of remaining edges with ``i`` endpoints among the
    ``2m`` matched vertices.
    """
    if not 0 <= m <= r + 1:
        raise ValueError(f"matching size m={m} out of range for r={r}")
    free = 2 * r + 2 - 2 * m
    e0 = free * (free - 1) // 2
    e1 = 2 * m * free
    e2 = 2 * m * (2 * m - 2) // 2
    return e0, e1, e2


def clique_edge_profile(r: int, in_matched: int) -> tuple[int, int, int]:
    """Edges of one ``r``-clique in ``(E_2, E_1, E_0)`` given how many of
    its vertices are matched."""
    kp = in_matched
    return (kp * (kp - 1) // 2, kp * (r - kp), (r - kp) * (r - kp - 1) // 2)


def type_class_size(r: int, k: int, m: int, level: int) -> int:
    """Number of ``r``-cliques with exactly ``level`` matched vertices in
    the ``k``-vertex instance with matching size ``m``."""
    unmatched = k - 2 * m
    if level < 0 or level > m or r - level < 0 or r - level > unmatched:
        return 0
    return comb(m, level) * 2**level * comb(unmatched, r - level)


@dataclass(frozen=True)
class TypeWeights:
    """Clique classes ``(k1, k2, k3)`` and class totals ``(x, y, z)``
    solving the 3x3 edge-class system exactly."""

    r: int
    m: int
    k1: int
    k2: int
    k3: int
    x: object
    y: object
    z: object

    def residual(self) -> tuple:
        """System residual (exactly zero for a valid solution)."""
        e0, e1, e2 = edge_type_counts(self.r, self.m)
        want = (rat(e2), rat(e1), rat(e0))
        cols = [clique_edge_profile(self.r, kp) for kp in (self.k1, self.k2, self.k3)]
        got = tuple(
            cols[0][i] * self.x + cols[1][i] * self.y + cols[2][i] * self.z
            for i in range(3)
        )
        return tuple(g - w for g, w in zip(got, want))


def closed_form_type_weights(r: int, m: int) -> TypeWeights:
    """Closed-form class totals for the ``2r + 2``-vertex instance.

    Two branches, split on the sign of ``2m - r - 2`` (whether cliques
    avoiding all matched vertices exist).  The returned solution always
    has exactly-zero residual and non-negative totals.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    if not 1 <= m <= r:
        raise ValueError(f"matching size m={m} must be in [1, {r}]")
    if 2 * m - r - 2 >= 0:
        k1, k2, k3 = m, m - 1, 2 * m - r - 2
        x = rat(
            2 * (r + 1 - m) * (2 * (r - m) ** 2 + m * r + 5 * r - 4 * m + 2),
            r * (r - 1) * (r + 2 - m),
        )
        y = rat(2 * m * (3 * r - 2 * m + 2), r * (r - 1))
        z = rat(2 * m * (m - 1), r * (r - 1) * (r + 2 - m))
    else:
        k1, k2, k3 = m, m - 1, 0
        x = rat(4 * (r + 1 - m), r - 1)
        y = rat(4 * m, r - 1)
        z = rat(2 * (r + 1 - m), r * (r - 1))
    tw = TypeWeights(r, m, k1, k2, k3, x, y, z)
    if tw.residual() != (ZERO, ZERO, ZERO):
        raise AssertionError(f"class system residual nonzero for r={r}, m={m}")
    if x < 0 or y < 0 or z < 0:
        raise AssertionError(f"negative class total for r={r}, m={m}")
    return tw


# -- per-clique class weights ------------------------------------------


@dataclass(frozen=True)
class MatchingClassWeights:
    """Class-compressed decomposition of a ``k``-vertex instance:
    one per-clique weight per clique class (all other classes zero)."""

    r: int
    k: int
    m: int
    per_clique: Mapping[int, object]

    def class_size(self, level: int) -> int:
        return type_class_size(self.r, self.k, self.m, level)

    def edge_class_sums(self) -> dict[int, object]:
        """Exact total weight over an edge of each type ``i`` in {0,1,2}.

        Only types that actually occur are reported; a valid
        decomposition has every reported sum equal to 1.
        """
        unmatched = self.k - 2 * self.m
        sums: dict[int, object] = {}
        for i in range(3):
            if i >= 1 and self.m == 0:
                continue
            if i == 2 and self.m < 2:
                continue
            if i <= 1 and unmatched < 2 - i:
                continue
            total = ZERO
            for level, w in self.per_clique.items():
                if level < i:
                    continue
                count = (
                    comb(self.m - i, level - i)
                    * 2 ** (level - i)
                    * comb(unmatched - (2 - i), self.r - level - (2 - i))
                    if unmatched - (2 - i) >= 0 and self.r - level - (2 - i) >= 0
                    else 0
                )
                total += count * w
            sums[i] = total
        return sums


def base_class_weights(r: int, m: int) -> MatchingClassWeights:
    """Per-clique class weights for the minimal instance ``k = 2r + 2``.

    For ``m`` in ``{0, r+1}`` the instance is edge-transitive and a
    single uniform weight works; otherwise the closed-form class totals
    are spread over their classes.  The exact per-edge-class sums are
    asserted to equal 1 before returning.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    if not 0 <= m <= r + 1:
        raise ValueError(f"matching size m={m} out of range for r={r}")
    k = 2 * r + 2
    per: dict[int, object] = {}
    if m == 0:
        # every edge lies in the same number of cliques
        per[0] = rat(1, comb(2 * r, r - 2))
    elif m == r + 1:
        # perfect matching removed; every edge crosses two pairs
        per[r] = rat(1, (r - 1) * 2 ** (r - 2))
    else:
        tw = closed_form_type_weights(r, m)
        totals: dict[int, object] = {}
        for level, total in ((tw.k1, tw.x), (tw.k2, tw.y), (tw.k3, tw.z)):
            # m = 1 degenerates to k2 = k3 = 0: merge onto one class
            totals[level] = totals.get(level, ZERO) + total
        for level, total in sorted(totals.items()):
            size = type_class_size(r, k, m, level)
            if size <= 0:
                raise AssertionError(f"empty clique class {level} for r={r}, m={m}")
            per[level] = total / size
    weights = MatchingClassWeights(r, k, m, per)
    sums = weights.edge_class_sums()
    if any(s != ONE for s in sums.values()):
        raise AssertionError(f"edge class sums {sums} != 1 for r={r}, m={m}")
    return weights


def class_weights(r: int, k: int, m: int) -> MatchingClassWeights:
    """Per-clique class weights for any ``k >= 2r + 2``.

    For ``k > 2r + 2`` the instance is first decomposed uniformly into
    its induced ``2r + 2``-vertex subgraphs (each gets weight
    ``1 / C(k-2, 2r)``, the number of such subgraphs through a fixed
    edge), and the base construction is applied inside each.  By
    symmetry the combined weight depends only on the clique class, so
    it can be accumulated combinatorially without enumerating subsets.
    """
    if r < 3:
        raise ValueError("clique order must be at least 3")
    if k < 2 * r + 2:
        raise ValueError(f"need k >= {2 * r + 2}, got {k}")
    if m > k // 2:
        raise ValueError(f"matching size m={m} impossible on {k} vertices")
    if k == 2 * r + 2:
        return base_class_weights(r, m)

    unmatched = k - 2 * m
    subs_per_edge = comb(k - 2, 2 * r)
    base: dict[int, MatchingClassWeights] = {}
    per: dict[int, object] = {}
    extra = r + 2  # vertices a subset adds around a fixed clique
    for level in range(0, min(m, r) + 1):
        if type_class_size(r, k, m, level) == 0:
            continue
        total = ZERO
        # p partners of the clique's matched vertices, q whole untouched
        # pairs, s single endpoints of untouched pairs, t leftover
        # unmatched vertices; the induced subset instance then has
        # matching size p + q and the clique sits in its class p.
        for p in range(0, min(level, extra) + 1):
            for q in range(0, min(m - level, (extra - p) // 2) + 1):
                for s in range(0, min(m - level - q, extra - p - 2 * q) + 1):
                    t = extra - p - 2 * q - s
                    avail_t = unmatched - (r - level)
                    if t < 0 or t > avail_t:
                        continue
                    j = p + q
                    if j not in base:
                        base[j] = base_class_weights(r, j)
                    w_sub = base[j].per_clique.get(p)
                    if not w_sub:
                        continue
                    ways = (
                        comb(level, p)
                        * comb(m - level, q)
                        * comb(m - level - q, s)
                        * 2**s
                        * comb(avail_t, t)
                    )
                    total += ways * w_sub
        if total != ZERO:
            per[level] = total / subs_per_edge
    weights = MatchingClassWeights(r, k, m, per)
    sums = weights.edge_class_sums()
    if any(s != ONE for s in sums.values()):
        raise AssertionError(f"edge class sums {sums} != 1 for r={r}, k={k}, m={m}")
    return weights


# -- materialization ----------------------------------------------------


def _canonical_permutation(k: int, matching: Iterable[Edge]) -> list[int]:
    """Map canonical layout (pairs ``(0,1), (2,3), ...`` then unmatched
    ascending) onto the actual vertex labels."""
    pairs = sorted(matching)
    matched = {v for e in pairs for v in e}
    perm = []
    for u, v in pairs:
        perm.extend((u, v))
    perm.extend(v for v in range(k) if v not in matched)
    return perm


def _class_cliques(r: int, k: int, m: int, level: int):
    """Cliques of one class in the canonical layout."""
    free = range(2 * m, k)
    for chosen in combinations(range(m), level):
        for ends in product(*[(2 * p, 2 * p + 1) for p in chosen]):
            for rest in combinations(free, r - level):
                yield tuple(sorted(ends + rest))


def decompose_clique_minus_matching(
    r: int,
    k: int,
    matching: Iterable[Edge],
    *,
    max_support: int = 2_000_000,
) -> CliqueWeighting:
    """Exact fractional ``r``-clique decomposition of the complete graph
    on ``[k]`` minus ``matching``.

    Requires ``r >= 3`` and ``k >= 2r + 2``.  The result is fully
    materialized (one entry per clique in the support); use
    :func:`class_weights` for the class-compressed form when ``k`` is
    large.
    """
    matching = validate_matching(matching, k)
    m = len(matching)
    weights = class_weights(r, k, m)
    support = sum(weights.class_size(level) for level in weights.per_clique)
    if support > max_support:
        raise ValueError(
            f"support of {support} cliques exceeds budget {max_support}; "
            "use class_weights() for the compressed form"
        )
    perm = _canonical_permutation(k, matching)
    out: dict[Clique, object] = {}
    for level, w in sorted(weights.per_clique.items()):
        for clique in _class_cliques(r, k, m, level):
            out[tuple(sorted(perm[v] for v in clique))] = w
    return CliqueWeighting(r, out)


def decompose_by_subset_recursion(
    r: int, k: int, matching: Iterable[Edge]
) -> CliqueWeighting:
    """Reference materialization: uniform weight over the induced
    ``2r + 2``-vertex subgraphs, then the base construction inside each.

    Exponentially slower than :func:`decompose_clique_minus_matching`
    but structurally independent of the class-compressed accumulation;
    kept for cross-validation.
    """
    matching = validate_matching(matching, k)
    if k < 2 * r + 2:
        raise ValueError(f"need k >= {2 * r + 2}, got {k}")
    if k == 2 * r + 2:
        return decompose_clique_minus_matching(r, k, matching)
    w_sub = rat(1, comb(k - 2, 2 * r))
    acc: dict[Clique, object] = {}
    for subset in combinations(range(k), 2 * r + 2):
        inside = [e for e in matching if e[0] in subset and e[1] in subset]
        index = {v: i for i, v in enumerate(subset)}
        local = decompose_clique_minus_matching(
            r, 2 * r + 2, [(index[u], index[v]) for u, v in inside]
        )
        for clique, w in local.weights.items():
            key = tuple(sorted(subset[i] for i in clique))
            acc[key] = acc.get(key, ZERO) + w_sub * w
    return CliqueWeighting(r, acc)
