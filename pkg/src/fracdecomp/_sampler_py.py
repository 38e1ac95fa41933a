"""Pure-Python sampler kernel.

Reference implementation of the staged random-subgraph process and the
Monte Carlo accumulators.  The compiled kernel in ``_sampler.pyx``
mirrors this code draw-for-draw (same Philox stream, same consumption
order); the test suite asserts the two produce identical samples.

Process, per stage ``i`` (of ``r`` stages, block size ``m``):

1. collect the still-unconsidered non-neighbours of the previous
   stage's chosen pair into ``B`` (empty at stage 1);
2. the first half of the stage set is ``B`` plus a uniform fill up to
   ``m`` vertices; the second half is a uniform ``m``-subset of the
   rest;
3. a pair of distinct vertices is drawn with probability ``1/m^2`` if
   both lie in one half and ``1/m^3`` across halves (drawn as a
   same-half Bernoulli with probability ``(m-1)/m``, then a uniform
   pair in the selected regime -- identical distribution);
4. every considered vertex is retired, so each vertex is considered
   exactly once over the whole run.
"""

from __future__ import annotations

from .rng import Philox

BACKEND = "python"


def _sample_once(adj: list[int], n: int, r: int, m: int, rng: Philox, out_chosen, out_flags):
    pool = list(range(n))
    for i in range(r):
        if i == 0:
            b_set: list[int] = []
            rest = pool
        else:
            a_bits = adj[out_chosen[2 * i - 2]]
            b_bits = adj[out_chosen[2 * i - 1]]
            both = a_bits & b_bits
            b_set = [v for v in pool if not (both >> v) & 1]
            rest = [v for v in pool if (both >> v) & 1]
        fill = m - len(b_set)
        if fill < 0:
            raise ValueError(
                "minimum-degree precondition violated: more than m "
                "unconsidered non-neighbours at one stage"
            )
        size = len(rest)
        for t in range(fill + m):
            j = t + rng.bounded(size - t)
            rest[t], rest[j] = rest[j], rest[t]
        a1 = b_set + rest[:fill]
        a2 = rest[fill : fill + m]
        if rng.bounded(m) != 0:
            half = a1 if rng.bounded(2) == 0 else a2
            p = rng.bounded(m)
            q = rng.bounded(m - 1)
            if q >= p:
                q += 1
            out_chosen[2 * i] = half[p]
            out_chosen[2 * i + 1] = half[q]
            out_flags[i] = 1
        else:
            out_chosen[2 * i] = a1[rng.bounded(m)]
            out_chosen[2 * i + 1] = a2[rng.bounded(m)]
            out_flags[i] = 0
        pool = sorted(rest[fill + m :])


def sample_chosen(adj, n, r, m, seed, stream, nsamples):
    """Chosen vertex sequences (stage order) and same-half flags."""
    rng = Philox(seed, stream)
    chosen = [0] * (2 * r)
    flags = [0] * r
    out = []
    for _ in range(nsamples):
        _sample_once(adj, n, r, m, rng, chosen, flags)
        out.append((tuple(chosen), tuple(flags)))
    return out


def sample_traced(adj, n, r, m, seed, stream):
    """One sample with the full stage trace, for invariant checks.

    Returns (chosen, flags, stages) where each stage is a dict with the
    pending non-neighbour set ``b_set``, the two halves ``a1``/``a2``,
    and the chosen pair.  Consumes the stream exactly like
    ``sample_chosen`` for one sample.
    """
    rng = Philox(seed, stream)
    pool = list(range(n))
    chosen: list[int] = []
    flags: list[int] = []
    stages = []
    for i in range(r):
        if i == 0:
            b_set: list[int] = []
            rest = pool
        else:
            both = adj[chosen[-2]] & adj[chosen[-1]]
            b_set = [v for v in pool if not (both >> v) & 1]
            rest = [v for v in pool if (both >> v) & 1]
        fill = m - len(b_set)
        if fill < 0:
            raise ValueError("minimum-degree precondition violated")
        size = len(rest)
        for t in range(fill + m):
            j = t + rng.bounded(size - t)
            rest[t], rest[j] = rest[j], rest[t]
        a1 = b_set + rest[:fill]
        a2 = rest[fill : fill + m]
        if rng.bounded(m) != 0:
            half = a1 if rng.bounded(2) == 0 else a2
            p = rng.bounded(m)
            q = rng.bounded(m - 1)
            if q >= p:
                q += 1
            pair = (half[p], half[q])
            flags.append(1)
        else:
            pair = (a1[rng.bounded(m)], a2[rng.bounded(m)])
            flags.append(0)
        chosen.extend(pair)
        stages.append(
            {"b_set": list(b_set), "a1": list(a1), "a2": list(a2), "pair": pair}
        )
        pool = sorted(rest[fill + m :])
    return chosen, flags, stages


def batch_stats(adj, n, r, m, seed, stream, nsamples):
    """Aggregate Monte Carlo statistics over ``nsamples`` runs.

    Returns (edge_counts, sum_x2, sum_x2sq, structure_violations,
    missing_edges) where ``edge_counts`` is indexed by the upper
    triangle, ``x2`` is the per-sample count of same-half stages, and
    a structure violation is a missing sample edge between stages more
    than one apart (which would break the guaranteed spanning pattern).
    """
    rng = Philox(seed, stream)
    edge_counts = [0] * (n * (n - 1) // 2)
    sum_x2 = 0
    sum_x2sq = 0
    violations = 0
    missing = 0
    chosen = [0] * (2 * r)
    flags = [0] * r
    for _ in range(nsamples):
        _sample_once(adj, n, r, m, rng, chosen, flags)
        x2 = sum(flags)
        sum_x2 += x2
        sum_x2sq += x2 * x2
        for ai in range(2 * r):
            u = chosen[ai]
            for bi in range(ai + 1, 2 * r):
                v = chosen[bi]
                if (adj[u] >> v) & 1:
                    a, b = (u, v) if u < v else (v, u)
                    edge_counts[a * (2 * n - a - 1) // 2 + (b - a - 1)] += 1
                else:
                    missing += 1
                    if bi // 2 - ai // 2 >= 2:
                        violations += 1
    return edge_counts, sum_x2, sum_x2sq, violations, missing
