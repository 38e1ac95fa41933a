"""Core graph types: simple graphs, structured constructors, clique
enumeration, and the exact certificate verifier.

Everything downstream relies on two properties fixed here:

* vertex ids are dense integers ``0..n-1`` and every edge is stored
  canonically as ``(min, max)``, so certificates are stable;
* ``verify_weighting`` is exact -- edge sums are compared with rational
  equality and no tolerance appears anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .rational import ONE, ZERO, is_rational, rat

Edge = tuple[int, int]
Clique = tuple[int, ...]


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an edge."""
    if u == v:
        raise ValueError(f"self-loop {u}-{v}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    Adjacency queries are answered from per-vertex bitsets, which is
    also what makes the clique enumeration usable on the dense hosts
    this package works with.
    """

    __slots__ = ("n", "edges", "_adj", "_hash")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canonical = set()
        adj = [0] * n
        for u, v in edges:
            u, v = edge_key(u, v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            canonical.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.edges = frozenset(canonical)
        self._adj = adj
        self._hash = None

    # -- basic queries -------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return bool(self._adj[u] >> v & 1)

    def adjacency_bits(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitset."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(self.degree(v) for v in range(self.n))

    def num_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def non_neighbors(self, v: int) -> list[int]:
        """Vertices not adjacent to ``v``, including ``v`` itself."""
        bits = ~self._adj[v] & ((1 << self.n) - 1)
        return _bits_to_list(bits)

    def complement(self) -> "Graph":
        missing = [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if not self.has_edge(u, v)
        ]
        return Graph(self.n, missing)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` plus the local->global map.

        Local labels follow the sorted order of ``vertices``.
        """
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        edges = [
            (index[u], index[v])
            for u, v in combinations(vs, 2)
            if self.has_edge(u, v)
        ]
        return Graph(len(vs), edges), vs

    def plus_edges(self, extra: Iterable[Edge]) -> "Graph":
        return Graph(self.n, list(self.edges) + [edge_key(u, v) for u, v in extra])

    def minus_edges(self, removed: Iterable[Edge]) -> "Graph":
        drop = {edge_key(u, v) for u, v in removed}
        if not drop <= self.edges:
            raise ValueError("cannot remove edges that are not present")
        return Graph(self.n, self.edges - drop)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2))

    # -- dunder --------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def _bits_to_list(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# -- structured constructors ------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def doubled_path_complement(r: int) -> Graph:
    """Graph on ``2r`` vertices grouped into pairs ``{2i, 2i+1}`` with all
    four edges between pairs ``i`` and ``j`` exactly when ``|i - j| >= 2``.

    Equivalently: the complement of a path on ``r`` vertices with every
    vertex doubled (each pair is the double of one path vertex).  For
    ``r >= 3`` its minimum degree is ``2r - 6``.
    """
    if r < 1:
        raise ValueError("pair count must be >= 1")
    edges = []
    for i in range(r):
        for j in range(i + 2, r):
            for a in (2 * i, 2 * i + 1):
                for b in (2 * j, 2 * j + 1):
                    edges.append((a, b))
    return Graph(2 * r, edges)


def pair_of(v: int) -> int:
    """Pair index of a vertex of ``doubled_path_complement``."""
    return v // 2


def complete_multipartite(k: int, class_size: int = 4) -> Graph:
    """Complete ``k``-partite graph with classes ``{class_size*i, ...}``."""
    if k < 1 or class_size < 1:
        raise ValueError("need k >= 1 and class_size >= 1")
    g, _ = blow_up(complete_graph(k), class_size)
    return g


def blow_up(g: Graph, t: int) -> tuple[Graph, list[int]]:
    """Replace each vertex by ``t`` pairwise non-adjacent copies.

    Copies of ``u`` and ``v`` are adjacent exactly when ``uv`` is an
    edge of ``g``.  Copy ``j`` of vertex ``u`` gets id ``u*t + j``;
    the returned projection list maps each new id to its original.
    """
    if t < 1:
        raise ValueError("blow-up factor must be >= 1")
    edges = []
    for u, v in g.edges:
        for a in range(t):
            for b in range(t):
                edges.append((u * t + a, v * t + b))
    projection = [w // t for w in range(g.n * t)]
    return Graph(g.n * t, edges), projection


# -- clique enumeration ------------------------------------------------


def enumerate_cliques(g: Graph, r: int) -> list[Clique]:
    """All ``r``-vertex complete subgraphs, each once, in lexicographic
    order of their sorted vertex tuples.

    Deterministic output order is part of the contract: certificates
    and golden tests rely on it.
    """
    if not 2 <= r <= g.n:
        raise ValueError(f"clique order r={r} out of range for n={g.n}")
    adj = g._adj
    out: list[Clique] = []
    prefix: list[int] = []

    def extend(candidates: int, depth: int) -> None:
        if depth == r:
            out.append(tuple(prefix))
            return
        # iterating ascending, so after removing v the remaining
        # candidates are exactly those > v
        while candidates and candidates.bit_count() >= r - depth:
            low = candidates & -candidates
            v = low.bit_length() - 1
            candidates ^= low
            prefix.append(v)
            extend(candidates & adj[v], depth + 1)
            prefix.pop()

    full = (1 << g.n) - 1
    for v in range(g.n):
        prefix.append(v)
        extend(adj[v] & ~((1 << (v + 1)) - 1) & full, 1)
        prefix.pop()
    return out


def cliques_containing_edge(g: Graph, r: int, edge: Edge) -> list[Clique]:
    """The ``r``-cliques of ``g`` whose edge set contains ``edge``."""
    u, v = edge_key(*edge)
    if not g.has_edge(u, v):
        raise ValueError(f"{edge} is not an edge of the graph")
    common = g._adj[u] & g._adj[v]
    shared = _bits_to_list(common)
    out = []
    for extra in combinations(shared, r - 2):
        if g.is_clique(extra):
            out.append(tuple(sorted((u, v) + extra)))
    return sorted(out)


# -- matchings ---------------------------------------------------------


def validate_matching(edges: Iterable[Edge], n: int | None = None) -> frozenset[Edge]:
    """Canonicalize a set of edges, checking pairwise vertex-disjointness."""
    canonical = set()
    seen: set[int] = set()
    for u, v in edges:
        e = edge_key(u, v)
        if n is not None and not (0 <= e[0] < n and 0 <= e[1] < n):
            raise ValueError(f"matching edge {e} out of range for n={n}")
        if e[0] in seen or e[1] in seen:
            raise ValueError(f"edges are not vertex-disjoint at {e}")
        seen.update(e)
        canonical.add(e)
    return frozenset(canonical)


# -- weightings and the exact verifier ---------------------------------


@dataclass(frozen=True)
class CliqueWeighting:
    """Non-negative rational weights on the ``r``-cliques of some graph.

    Keys are canonical sorted vertex tuples.  This is the central
    certificate type: a weighting is a fractional clique decomposition
    of ``g`` exactly when ``verify_weighting(g, w)`` passes.
    """

    r: int
    weights: Mapping[Clique, object]

    def __post_init__(self):
        for clique in self.weights:
            if len(clique) != self.r or tuple(sorted(clique)) != clique:
                raise ValueError(f"{clique} is not a canonical {self.r}-tuple")

    def edge_sums(self) -> dict[Edge, object]:
        """Exact total weight over each edge covered by the support."""
        sums: dict[Edge, object] = {}
        for clique, w in self.weights.items():
            for e in combinations(clique, 2):
                sums[e] = sums.get(e, ZERO) + w
        return sums

    def support_size(self) -> int:
        return sum(1 for w in self.weights.values() if w != 0)

    def scaled(self, factor) -> "CliqueWeighting":
        return CliqueWeighting(
            self.r, {k: w * factor for k, w in self.weights.items()}
        )


def combine_weightings(r: int, parts: Iterable[tuple[object, Mapping[Clique, object]]]) -> CliqueWeighting:
    """Weighted sum ``sum_i  factor_i * weighting_i`` with exact arithmetic."""
    acc: dict[Clique, object] = {}
    for factor, weights in parts:
        if factor == 0:
            continue
        for clique, w in weights.items():
            acc[clique] = acc.get(clique, ZERO) + factor * w
    return CliqueWeighting(r, acc)


TargetFn = Callable[[Edge], object]


def _as_target_fn(target) -> TargetFn:
    if target is None:
        return lambda e: ONE
    if is_rational(target):
        value = rat(target)
        return lambda e: value
    if isinstance(target, Mapping):
        mapping = {edge_key(*e): v for e, v in target.items()}

        def lookup(e: Edge):
            try:
                return mapping[e]
            except KeyError:
                raise ValueError(f"edge target undefined for {e}") from None

        return lookup
    if callable(target):
        return target
    raise TypeError(f"unsupported target specification {target!r}")


@dataclass
class VerifyReport:
    """Outcome of the exact verifier; carries failures instead of raising."""

    ok: bool
    checked_edges: int
    bad_edges: list[tuple[Edge, object, object]] = field(default_factory=list)
    negative_cliques: list[Clique] = field(default_factory=list)
    invalid_cliques: list[Clique] = field(default_factory=list)

    def residual_summary(self) -> list[str]:
        out = [
            f"edge {u}-{v}: expected {want}, got {got}, residual {got - want}"
            for (u, v), want, got in self.bad_edges
        ]
        out += [f"negative weight on clique {c}" for c in self.negative_cliques]
        out += [f"not a clique of the graph: {c}" for c in self.invalid_cliques]
        return out


def verify_weighting(g: Graph, weighting: CliqueWeighting, target=None) -> VerifyReport:
    """Exactly check that every edge of ``g`` carries total weight
    ``target(e)`` and that all weights are non-negative.

    ``target`` may be None (constant 1), a rational, a mapping from
    edges to rationals, or a callable.  The comparison is exact
    rational equality.
    """
    target_fn = _as_target_fn(target)
    report = VerifyReport(ok=True, checked_edges=len(g.edges))

    for clique, w in weighting.weights.items():
        if w < 0:
            report.negative_cliques.append(clique)
        if not (all(0 <= v < g.n for v in clique) and g.is_clique(clique)):
            report.invalid_cliques.append(clique)

    sums = weighting.edge_sums()
    for e in g.edge_list():
        want = target_fn(e)
        got = sums.get(e, ZERO)
        if got != want:
            report.bad_edges.append((e, want, got))
    # weight on non-edges of g can only come from invalid cliques,
    # which are already reported above

    report.ok = not (
        report.bad_edges or report.negative_cliques or report.invalid_cliques
    )
    return report
