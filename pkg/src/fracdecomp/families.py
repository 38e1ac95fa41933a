"""Exact symmetric distributions over near-complete induced subgraphs.

Two families are provided, both with seeded samplers, exact rational
edge marginals, and exhaustive enumerators at small sizes:

* ``two_per_class_family``: the host carries a spanning complete
  multipartite graph with classes of four; a member picks ``r + 1``
  classes and two vertices per picked class.  Members are complete up
  to at most one missing edge per picked class, so the closed-form
  matching-removed construction decomposes every member.
* ``paired_groups_family``: the host carries a spanning doubled-path
  complement; vertices come in groups of four (two consecutive pairs).
  A member picks ``2k`` groups and one of two prescribed vertex pairs
  per group, under one of three pairing styles chosen uniformly.
  Style 0 members carry a spanning complete multipartite pattern;
  styles 1 and 2 carry a spanning complement-of-a-cycle pattern.

When the host has edges inside classes/groups those edges are
over-covered relative to the cross edges; ``equalize_marginals``
independently deletes each such edge with an exact keep probability so
that every host edge ends up with the same marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from .graph import (
    Clique,
    CliqueWeighting,
    Edge,
    Graph,
    complete_multipartite,
    doubled_path_complement,
    edge_key,
    verify_weighting,
)
from .kminusm import decompose_clique_minus_matching
from .rational import ONE, ZERO, rat
from .rng import Philox


@dataclass(frozen=True)
class Member:
    """An induced-with-deletions subgraph of the host, in host labels."""

    vertices: tuple[int, ...]
    edges: frozenset[Edge]

    def local_graph(self) -> tuple[Graph, list[int]]:
        index = {v: i for i, v in enumerate(self.vertices)}
        return (
            Graph(len(self.vertices), [(index[u], index[v]) for u, v in self.edges]),
            list(self.vertices),
        )

    def missing_edges(self) -> list[Edge]:
        return sorted(
            e
            for e in (edge_key(u, v) for u, v in combinations(self.vertices, 2))
            if e not in self.edges
        )


def _induced_member(host: Graph, vertices) -> Member:
    vs = tuple(sorted(vertices))
    edges = frozenset(
        (u, v) for u, v in combinations(vs, 2) if host.has_edge(u, v)
    )
    return Member(vs, edges)


class FamilyDistribution:
    """Common interface: seeded sampler, exact marginal, enumerator."""

    kind: str
    host: Graph
    deletable: frozenset[Edge]

    def draw(self, rng: Philox) -> Member:
        raise NotImplementedError

    def sample(self, seed: int, stream: int = 0) -> Member:
        member = self.draw(Philox(seed, stream))
        if not self.check_member(member):
            raise AssertionError("sampled member fails the family's structural predicate")
        return member

    def marginal(self, edge: Edge):
        raise NotImplementedError

    def support_size(self) -> int:
        raise NotImplementedError

    def enumerate_members(self, budget: int = 10**7) -> list[tuple[Member, object]]:
        raise NotImplementedError

    def check_member(self, member: Member) -> bool:
        raise NotImplementedError


# -- family one: two vertices per class ---------------------------------

_PAIRS_OF_FOUR = tuple(combinations(range(4), 2))  # lexicographic 2-subsets


class TwoPerClassFamily(FamilyDistribution):
    kind = "w"

    def __init__(self, r: int, k: int, host: Graph, classes):
        if r < 3:
            raise ValueError("clique order must be at least 3")
        if k < r + 1:
            raise ValueError(f"need at least r+1 = {r + 1} classes, got {k}")
        self.r = r
        self.k = k
        self.host = host
        self.classes = [tuple(sorted(c)) for c in classes]
        if len(self.classes) != k or any(len(c) != 4 for c in self.classes):
            raise ValueError("classes must be k disjoint 4-sets")
        flat = [v for c in self.classes for v in c]
        if sorted(flat) != list(range(host.n)) or host.n != 4 * k:
            raise ValueError("classes must partition the 4k host vertices")
        self._class_of = {}
        for idx, c in enumerate(self.classes):
            for v in c:
                self._class_of[v] = idx
        for a, b in combinations(range(k), 2):
            for u in self.classes[a]:
                for v in self.classes[b]:
                    if not host.has_edge(u, v):
                        raise ValueError(
                            f"host misses cross-class edge {u}-{v}; no spanning "
                            "complete multipartite pattern"
                        )
        self.deletable = frozenset(
            e for e in host.edges if self._class_of[e[0]] == self._class_of[e[1]]
        )

    def cross_marginal(self):
        return rat(math.comb(self.r + 1, 2), 4 * math.comb(self.k, 2))

    def intra_marginal(self):
        return rat(self.r + 1, 6 * self.k)

    def marginal(self, edge: Edge):
        u, v = edge_key(*edge)
        if not self.host.has_edge(u, v):
            raise ValueError(f"{edge} is not a host edge")
        if self._class_of[u] == self._class_of[v]:
            return self.intra_marginal()
        return self.cross_marginal()

    def draw(self, rng: Philox) -> Member:
        picked = sorted(rng.choose_subset(list(range(self.k)), self.r + 1))
        vertices = []
        for idx in picked:
            a, b = _PAIRS_OF_FOUR[rng.bounded(6)]
            cls = self.classes[idx]
            vertices += [cls[a], cls[b]]
        return _induced_member(self.host, vertices)

    def support_size(self) -> int:
        return math.comb(self.k, self.r + 1) * 6 ** (self.r + 1)

    def enumerate_members(self, budget: int = 10**7):
        if self.support_size() > budget:
            raise ValueError(
                f"support size {self.support_size()} exceeds budget {budget}"
            )
        prob = rat(1, self.support_size())
        out = []
        for picked in combinations(range(self.k), self.r + 1):
            for choice in product(_PAIRS_OF_FOUR, repeat=self.r + 1):
                vertices = []
                for idx, (a, b) in zip(picked, choice):
                    cls = self.classes[idx]
                    vertices += [cls[a], cls[b]]
                out.append((_induced_member(self.host, vertices), prob))
        return out

    def check_member(self, member: Member) -> bool:
        if len(member.vertices) != 2 * self.r + 2:
            return False
        by_class: dict[int, list[int]] = {}
        for v in member.vertices:
            by_class.setdefault(self._class_of[v], []).append(v)
        if any(len(vs) != 2 for vs in by_class.values()):
            return False
        # missing edges only inside picked classes: min degree >= n - 2
        return all(
            self._class_of[u] == self._class_of[v] for u, v in member.missing_edges()
        )


def two_per_class_family(
    r: int,
    k: int,
    host: Graph | None = None,
    classes=None,
    equalize: bool | None = None,
) -> FamilyDistribution:
    """Distribution over two-vertices-per-class members of a host with a
    spanning complete multipartite pattern (classes of four).

    With ``equalize`` (the default whenever the host has intra-class
    edges) the intra-class marginals are brought down to the
    cross-class value, which requires ``k >= (3r + 2) / 2``; every host
    edge then has marginal ``C(r+1, 2) / (4 C(k, 2))`` exactly.
    """
    if host is None:
        host = complete_multipartite(k, 4)
    if classes is None:
        classes = [tuple(range(4 * i, 4 * i + 4)) for i in range(k)]
    family = TwoPerClassFamily(r, k, host, classes)
    if equalize is None:
        equalize = bool(family.deletable)
    if not equalize:
        return family
    if family.intra_marginal() < family.cross_marginal():
        raise ValueError(
            f"k={k} is below the bound (3r+2)/2 = {(3 * r + 2) / 2}: intra-class "
            f"marginal {family.intra_marginal()} cannot be reduced to the "
            f"cross-class value {family.cross_marginal()}"
        )
    return equalize_marginals(family, family.deletable, family.cross_marginal())


# -- family two: one pair from each picked group ------------------------

# local 2-subsets of a group (a1, b1, a2, b2), per pairing style:
# style 0 keeps an original pair, styles 1 and 2 mix the two pairs
_GROUP_CHOICES = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


class PairedGroupsFamily(FamilyDistribution):
    kind = "m"

    def __init__(self, r: int, ell: int, k: int, host: Graph):
        if r < 3:
            raise ValueError("clique order must be at least 3")
        if ell < 2 * k:
            raise ValueError(f"need ell >= 2k = {2 * k}, got ell={ell}")
        if host.n != 4 * ell:
            raise ValueError(f"host must have 4*ell = {4 * ell} vertices")
        self.r = r
        self.ell = ell
        self.k = k
        self.host = host
        # spanning doubled-path-complement pattern in the standard
        # labeling: pair t = {2t, 2t+1}, all edges between pairs at
        # distance >= 2 must be present
        for t1 in range(2 * ell):
            for t2 in range(t1 + 2, 2 * ell):
                for u in (2 * t1, 2 * t1 + 1):
                    for v in (2 * t2, 2 * t2 + 1):
                        if not host.has_edge(u, v):
                            raise ValueError(
                                f"host misses edge {u}-{v} of the spanning "
                                "doubled-path-complement pattern"
                            )
        self.groups = [tuple(range(4 * j, 4 * j + 4)) for j in range(ell)]
        self._group_of = {v: v // 4 for v in range(host.n)}
        self.deletable = frozenset(
            e for e in host.edges if self._group_of[e[0]] == self._group_of[e[1]]
        )

    def cross_marginal(self):
        return rat(math.comb(2 * self.k, 2), 4 * math.comb(self.ell, 2))

    def intra_marginal(self):
        return rat(self.k, 3 * self.ell)

    def marginal(self, edge: Edge):
        u, v = edge_key(*edge)
        if not self.host.has_edge(u, v):
            raise ValueError(f"{edge} is not a host edge")
        if self._group_of[u] == self._group_of[v]:
            return self.intra_marginal()
        return self.cross_marginal()

    def draw(self, rng: Philox) -> Member:
        style = rng.bounded(3)
        picked = sorted(rng.choose_subset(list(range(self.ell)), 2 * self.k))
        vertices = []
        for j in picked:
            a, b = _GROUP_CHOICES[style][rng.bounded(2)]
            grp = self.groups[j]
            vertices += [grp[a], grp[b]]
        return _induced_member(self.host, vertices)

    def support_size(self) -> int:
        return 3 * math.comb(self.ell, 2 * self.k) * 2 ** (2 * self.k)

    def enumerate_members(self, budget: int = 10**7):
        if self.support_size() > budget:
            raise ValueError(
                f"support size {self.support_size()} exceeds budget {budget}"
            )
        prob = rat(1, self.support_size())
        out = []
        for style in range(3):
            for picked in combinations(range(self.ell), 2 * self.k):
                for coins in product(range(2), repeat=2 * self.k):
                    vertices = []
                    for j, coin in zip(picked, coins):
                        a, b = _GROUP_CHOICES[style][coin]
                        grp = self.groups[j]
                        vertices += [grp[a], grp[b]]
                    out.append((_induced_member(self.host, vertices), prob))
        return out

    def check_member(self, member: Member) -> bool:
        if len(member.vertices) != 4 * self.k:
            return False
        by_group: dict[int, list[int]] = {}
        for v in member.vertices:
            by_group.setdefault(self._group_of[v], []).append(v)
        if len(by_group) != 2 * self.k or any(len(vs) != 2 for vs in by_group.values()):
            return False
        return (
            member_spanning_multipartite_classes(member) is not None
            or member_missing_fits_cycle(member)
        )


def paired_groups_family(
    r: int,
    ell: int,
    host: Graph | None = None,
    k: int | None = None,
    equalize: bool | None = None,
) -> FamilyDistribution:
    """Distribution over one-pair-per-picked-group members of a host
    with a spanning doubled-path-complement pattern on ``4*ell``
    vertices.

    ``k`` defaults to ``ceil((3r + 2) / 2)``; members have ``4k``
    vertices.  With ``equalize`` (the default whenever the host has
    within-group edges) every host edge's marginal becomes exactly
    ``C(2k, 2) / (4 C(ell, 2))``, which requires ``ell >= (9r + 8) / 2``.
    """
    if k is None:
        k = math.ceil((3 * r + 2) / 2)
    if host is None:
        host = doubled_path_complement(2 * ell)
    family = PairedGroupsFamily(r, ell, k, host)
    if equalize is None:
        equalize = bool(family.deletable)
    if not equalize:
        return family
    if family.intra_marginal() < family.cross_marginal():
        raise ValueError(
            f"ell={ell} is below the bound: within-group marginal "
            f"{family.intra_marginal()} cannot be reduced to the cross-group "
            f"value {family.cross_marginal()}"
        )
    return equalize_marginals(family, family.deletable, family.cross_marginal())


# -- marginal equalization by independent deletion ----------------------


class EqualizedFamily(FamilyDistribution):
    """Post-hoc independent deletion of over-covered deletable edges.

    After a base member is drawn, each present deletable edge is kept
    independently with probability ``target / marginal(e)``, making
    every marginal exactly ``target`` while never leaving the family
    (deleting deletable edges keeps the structural predicate true).
    """

    def __init__(self, base: FamilyDistribution, deletable, target):
        self.base = base
        self.kind = base.kind
        self.host = base.host
        self.target = target
        self.deletable = frozenset(edge_key(u, v) for u, v in deletable)
        self._keep: dict[Edge, object] = {}
        for e in sorted(self.deletable):
            marginal = base.marginal(e)
            if marginal < target:
                raise ValueError(
                    f"deletable edge {e} has marginal {marginal} below the "
                    f"target {target}"
                )
            self._keep[e] = target / marginal
        for e in self.host.edge_list():
            if e not in self.deletable and base.marginal(e) != target:
                raise ValueError(
                    f"non-deletable edge {e} has marginal {base.marginal(e)} "
                    f"!= target {target}"
                )

    def draw(self, rng: Philox) -> Member:
        member = self.base.draw(rng)
        dropped = set()
        for e in sorted(member.edges & self.deletable):
            keep = self._keep[e]
            if not rng.bernoulli(int(keep.numerator), int(keep.denominator)):
                dropped.add(e)
        if not dropped:
            return member
        return Member(member.vertices, member.edges - dropped)

    def marginal(self, edge: Edge):
        self.base.marginal(edge)  # validates host membership
        return self.target

    def support_size(self) -> int:
        # worst case: every deletable edge present in every member
        return self.base.support_size() * 2 ** len(self.deletable)

    def enumerate_members(self, budget: int = 10**7):
        base_entries = self.base.enumerate_members(budget)
        out = []
        for member, prob in base_entries:
            present = sorted(member.edges & self.deletable)
            if len(out) + 2 ** len(present) > budget:
                raise ValueError(f"expanded support exceeds budget {budget}")
            for pattern in product((True, False), repeat=len(present)):
                p = prob
                dropped = set()
                for e, kept in zip(present, pattern):
                    keep = self._keep[e]
                    if kept:
                        p = p * keep
                    else:
                        p = p * (ONE - keep)
                        dropped.add(e)
                if p == 0:
                    continue
                out.append((Member(member.vertices, member.edges - dropped), p))
        return out

    def check_member(self, member: Member) -> bool:
        return self.base.check_member(member)


def equalize_marginals(
    family: FamilyDistribution, deletable, target
) -> FamilyDistribution:
    """Equalize all host-edge marginals to ``target`` by independent
    deletion of the (over-covered) ``deletable`` edges."""
    return EqualizedFamily(family, deletable, target)


# -- structural predicates ----------------------------------------------


def member_spanning_multipartite_classes(member: Member):
    """Classes of a spanning complete multipartite pattern (4 per
    class) in the member, or None.

    Member vertices must come in whole host pairs (pair of ``v`` is
    ``v // 2``); pairs at index distance 1 miss their cross edges, so
    such pairs are forced into one class.  Those conflicts are
    pairwise disjoint, leaving the rest to be grouped freely.
    """
    vs = sorted(member.vertices)
    pairs = sorted({v // 2 for v in vs})
    if len(pairs) * 2 != len(vs):
        return None
    for t in pairs:
        if 2 * t not in member.vertices or 2 * t + 1 not in member.vertices:
            return None
    classes = []
    leftovers = []
    j = 0
    while j < len(pairs):
        if j + 1 < len(pairs) and pairs[j + 1] - pairs[j] == 1:
            classes.append((pairs[j], pairs[j + 1]))
            j += 2
        else:
            leftovers.append(pairs[j])
            j += 1
    if len(leftovers) % 2:
        return None
    classes += list(zip(leftovers[0::2], leftovers[1::2]))
    vertex_classes = [
        tuple(v for t in cls for v in (2 * t, 2 * t + 1)) for cls in classes
    ]
    # defensive adjacency check across classes
    for ca, cb in combinations(vertex_classes, 2):
        for u in ca:
            for v in cb:
                if edge_key(u, v) not in member.edges:
                    return None
    return vertex_classes


def member_missing_fits_cycle(member: Member) -> bool:
    """True when the member's missing edges form vertex-disjoint paths,
    i.e. they embed into one spanning cycle (the member then contains
    the complement of that cycle as a spanning subgraph)."""
    missing = member.missing_edges()
    degree: dict[int, int] = {}
    parent: dict[int, int] = {v: v for v in member.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in missing:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
        if degree[u] > 2 or degree[v] > 2:
            return False
        ru, rv = find(u), find(v)
        if ru == rv:
            return False  # a cycle shorter than the full vertex set
        parent[ru] = rv
    return True


# -- composition ---------------------------------------------------------


def matching_member_decomposer(r: int):
    """Member decomposer for members that are complete graphs minus a
    matching (in their local labels)."""

    def decompose(member: Member) -> CliqueWeighting:
        local, mapping = member.local_graph()
        missing = local.complement().edges
        w = decompose_clique_minus_matching(r, local.n, missing)
        return CliqueWeighting(
            r,
            {
                tuple(sorted(mapping[i] for i in clique)): value
                for clique, value in w.weights.items()
            },
        )

    return decompose


def decompose_via_family(
    family: FamilyDistribution,
    r: int,
    member_decomposer,
    *,
    budget: int = 10**7,
    verify_members: bool = True,
) -> CliqueWeighting:
    """Exact decomposition of the host: enumerate the family, decompose
    each member, and combine ``w_K = (1/c) * sum_M p_M * w_{M,K}``
    where ``c`` is the common edge marginal.

    Every host edge then carries total weight exactly 1 provided each
    member decomposition is exact (checked when ``verify_members``).
    """
    edges = family.host.edge_list()
    if not edges:
        raise ValueError("host has no edges to decompose")
    c = family.marginal(edges[0])
    for e in edges[1:]:
        if family.marginal(e) != c:
            raise ValueError(
                f"marginals are not constant: {e} has {family.marginal(e)} != {c}"
            )
    if c <= 0:
        raise ValueError("common marginal must be positive")

    acc: dict[Clique, object] = {}
    inv_c = ONE / c
    for member, prob in family.enumerate_members(budget):
        part = member_decomposer(member)
        if verify_members:
            local, mapping = member.local_graph()
            index = {v: i for i, v in enumerate(mapping)}
            local_w = CliqueWeighting(
                part.r,
                {
                    tuple(sorted(index[v] for v in clique)): value
                    for clique, value in part.weights.items()
                },
            )
            report = verify_weighting(local, local_w, 1)
            if not report.ok:
                raise ValueError(
                    "member decomposition failed exact verification: "
                    + "; ".join(report.residual_summary()[:3])
                )
        factor = prob * inv_c
        for clique, value in part.weights.items():
            acc[clique] = acc.get(clique, ZERO) + factor * value
    return CliqueWeighting(r, acc)
