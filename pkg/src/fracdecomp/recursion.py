"""Decomposition of graphs whose complement splits into few matchings.

If the non-edges of a host split into ``ell`` matchings and the host
has at least ``2^ell * r + 2^(ell+1) - 2`` vertices, an exact
fractional ``r``-clique decomposition is obtained by induction: adding
the first matching back gives a host whose complement splits into
``ell - 1`` matchings, which is decomposed into cliques of order
``2r + 2``; each of those induces, in the original host, a complete
graph minus a sub-matching, which the closed-form construction
handles.  Weights compose multiplicatively.

This module also builds the explicit matching partitions used for the
structured complements that arise elsewhere in the package (the
doubled-path pattern and even cycles).
"""

from __future__ import annotations

from dataclasses import dataclass
from .graph import (
    Clique,
    CliqueWeighting,
    Edge,
    Graph,
    doubled_path_complement,
    edge_key,
    validate_matching,
)
from .kminusm import decompose_clique_minus_matching
from .rational import ZERO


@dataclass(frozen=True)
class MatchingPartition:
    """Ordered list of pairwise edge-disjoint matchings."""

    parts: tuple[frozenset[Edge], ...]

    @classmethod
    def from_lists(cls, parts) -> "MatchingPartition":
        canonical = []
        seen: set[Edge] = set()
        for part in parts:
            matching = validate_matching(part)
            overlap = seen & matching
            if overlap:
                raise ValueError(f"parts are not edge-disjoint at {sorted(overlap)}")
            seen |= matching
            canonical.append(matching)
        return cls(tuple(canonical))

    def union(self) -> frozenset[Edge]:
        out: set[Edge] = set()
        for part in self.parts:
            out |= part
        return frozenset(out)

    def covers_exactly(self, edges) -> bool:
        return self.union() == frozenset(edge_key(u, v) for u, v in edges)

    def __len__(self) -> int:
        return len(self.parts)


def required_host_size(r: int, ell: int) -> int:
    return 2**ell * r + 2 ** (ell + 1) - 2


def decompose_sparse_complement(
    g: Graph, r: int, partition: MatchingPartition
) -> CliqueWeighting:
    """Exact fractional ``r``-clique decomposition of ``g`` given a
    partition of the complement's edges into matchings."""
    if r < 3:
        raise ValueError("clique order must be at least 3")
    ell = len(partition)
    if ell < 1:
        raise ValueError("partition must have at least one matching")
    need = required_host_size(r, ell)
    if g.n < need:
        raise ValueError(
            f"host has {g.n} vertices; {need} required for {ell} matchings at r={r}"
        )
    complement_edges = frozenset(g.complement().edges)
    if not partition.covers_exactly(complement_edges):
        raise ValueError("partition does not cover the complement edge set exactly")
    return _decompose(g, r, partition)


def _decompose(g: Graph, r: int, partition: MatchingPartition) -> CliqueWeighting:
    if len(partition) == 1:
        return decompose_clique_minus_matching(r, g.n, partition.parts[0])

    first = partition.parts[0]
    rest = MatchingPartition(partition.parts[1:])
    inner_order = 2 * r + 2
    inner = _decompose(g.plus_edges(first), inner_order, rest)
    # the first recursive level always targets clique order 2r + 2
    assert inner.r == inner_order

    acc: dict[Clique, object] = {}
    for vertices, w_outer in inner.weights.items():
        if w_outer == 0:
            continue
        inside = sorted(
            e for e in first if e[0] in vertices and e[1] in vertices
        )
        index = {v: i for i, v in enumerate(vertices)}
        local = decompose_clique_minus_matching(
            r, inner_order, [(index[u], index[v]) for u, v in inside]
        )
        for clique, w in local.weights.items():
            key = tuple(sorted(vertices[i] for i in clique))
            acc[key] = acc.get(key, ZERO) + w_outer * w
    return CliqueWeighting(r, acc)


# -- structured partitions ----------------------------------------------


def partition_doubled_path_complement(r: int) -> MatchingPartition:
    """Partition of the non-edges of ``doubled_path_complement(r)`` into
    exactly 5 matchings.

    Colour 5 holds the intra-pair edges.  The four edges between
    consecutive pairs ``i, i+1`` split into two perfect matchings on
    those four vertices, coloured 1/2 when ``i`` is even (0-based) and
    3/4 when ``i`` is odd, so edges of one colour never share a pair.
    """
    if r < 1:
        raise ValueError("pair count must be >= 1")
    colours: list[list[Edge]] = [[], [], [], [], []]
    for i in range(r - 1):
        a0, b0 = 2 * i, 2 * i + 1
        a1, b1 = 2 * i + 2, 2 * i + 3
        straight = [(a0, a1), (b0, b1)]
        crossed = [(a0, b1), (b0, a1)]
        if i % 2 == 0:
            colours[0] += straight
            colours[1] += crossed
        else:
            colours[2] += straight
            colours[3] += crossed
    colours[4] = [(2 * i, 2 * i + 1) for i in range(r)]
    partition = MatchingPartition.from_lists(colours)
    host = doubled_path_complement(r)
    if not partition.covers_exactly(host.complement().edges):
        raise AssertionError("doubled-path partition does not cover the complement")
    return partition


def partition_cycle_edges(n: int) -> MatchingPartition:
    """Alternating 2-colouring of the edges of an even ``n``-cycle into
    two perfect matchings (cycle edges ``(i, i+1 mod n)``)."""
    if n < 4 or n % 2 != 0:
        raise ValueError(f"cycle length must be even and >= 4, got {n}")
    evens = [(i, i + 1) for i in range(0, n - 1, 2)]
    odds = [(i, i + 1) for i in range(1, n - 2, 2)] + [(0, n - 1)]
    return MatchingPartition.from_lists([evens, odds])
