"""Sampler kernel selection.

The compiled Cython kernel is preferred when it importable; the pure
Python kernel is the fallback and the behavioural reference.  Both
consume the identical Philox stream, so the choice never changes any
sampled value, only the speed.  Set ``FRACDECOMP_PURE=1`` to force the
pure kernel (used by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _sampler_py

if os.environ.get("FRACDECOMP_PURE"):
    _impl = _sampler_py
else:
    try:
        from . import _sampler as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _sampler_py

BACKEND: str = _impl.BACKEND


def adjacency_words(g) -> np.ndarray:
    """Per-vertex adjacency bitsets as little-endian uint64 words."""
    nwords = (g.n + 63) // 64
    words = np.zeros((g.n, nwords), dtype=np.uint64)
    for v in range(g.n):
        bits = g.adjacency_bits(v)
        for w in range(nwords):
            words[v, w] = (bits >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return words


def _adj_arg(g):
    if _impl.BACKEND == "cython":
        return adjacency_words(g)
    return list(g._adj)


def sample_chosen(g, r: int, m: int, seed: int, stream: int, nsamples: int):
    """Sampled (chosen vertices, same-half flags) rows, backend-agnostic."""
    raw = _impl.sample_chosen(_adj_arg(g), g.n, r, m, seed, stream, nsamples)
    if _impl.BACKEND == "cython":
        chosen, flags = raw
        return [
            (tuple(int(v) for v in chosen[i]), tuple(int(f) for f in flags[i]))
            for i in range(nsamples)
        ]
    return raw


def batch_stats(g, r: int, m: int, seed: int, stream: int, nsamples: int):
    counts, sum_x2, sum_x2sq, violations, missing = _impl.batch_stats(
        _adj_arg(g), g.n, r, m, seed, stream, nsamples
    )
    if _impl.BACKEND == "cython":
        counts = counts.tolist()
    return list(counts), int(sum_x2), int(sum_x2sq), int(violations), int(missing)
