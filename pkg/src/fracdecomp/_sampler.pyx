# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampler kernel.

Draw-for-draw mirror of ``_sampler_py``: the same Philox4x32-10 stream
is consumed in the same order, so both backends produce identical
samples for identical seeds.  Only the inner loops are compiled; all
orchestration stays in ``fracdecomp.sampler``.
"""

from libc.stdint cimport int32_t, int64_t, uint8_t, uint32_t, uint64_t

import numpy as np

BACKEND = "cython"

cdef uint32_t PHILOX_M0 = 0xD2511F53
cdef uint32_t PHILOX_M1 = 0xCD9E8D57
cdef uint32_t PHILOX_W0 = 0x9E3779B9
cdef uint32_t PHILOX_W1 = 0xBB67AE85


cdef struct PhiloxState:
    uint32_t k0, k1
    uint32_t c0, c1, c2, c3
    uint32_t buf[4]
    int pos


cdef inline void _philox_block(PhiloxState *s) noexcept nogil:
    cdef uint32_t x0 = s.c0, x1 = s.c1, x2 = s.c2, x3 = s.c3
    cdef uint32_t k0 = s.k0, k1 = s.k1
    cdef uint64_t p0, p1
    cdef int i
    for i in range(10):
        p0 = (<uint64_t> PHILOX_M0) * x0
        p1 = (<uint64_t> PHILOX_M1) * x2
        x0 = (<uint32_t> (p1 >> 32)) ^ x1 ^ k0
        x1 = <uint32_t> p1
        x2 = (<uint32_t> (p0 >> 32)) ^ x3 ^ k1
        x3 = <uint32_t> p0
        k0 += PHILOX_W0
        k1 += PHILOX_W1
    s.buf[0] = x0
    s.buf[1] = x1
    s.buf[2] = x2
    s.buf[3] = x3
    s.pos = 0
    s.c0 += 1
    if s.c0 == 0:
        s.c1 += 1
        if s.c1 == 0:
            s.c2 += 1
            if s.c2 == 0:
                s.c3 += 1


cdef inline uint32_t _next_u32(PhiloxState *s) noexcept nogil:
    cdef uint32_t value
    if s.pos == 4:
        _philox_block(s)
    value = s.buf[s.pos]
    s.pos += 1
    return value


cdef inline uint32_t _bounded(PhiloxState *s, uint32_t n) noexcept nogil:
    cdef uint64_t threshold = ((<uint64_t> 0x100000000) // n) * n
    cdef uint32_t x
    while True:
        x = _next_u32(s)
        if (<uint64_t> x) < threshold:
            return x % n


cdef inline void _init_state(PhiloxState *s, uint64_t seed, uint64_t stream) noexcept nogil:
    s.k0 = <uint32_t> seed
    s.k1 = <uint32_t> (seed >> 32)
    s.c0 = 0
    s.c1 = 0
    s.c2 = <uint32_t> stream
    s.c3 = <uint32_t> (stream >> 32)
    s.pos = 4


cdef inline bint _adj(const uint64_t[:, ::1] words, Py_ssize_t u, Py_ssize_t v) noexcept nogil:
    return (words[u, v >> 6] >> (v & 63)) & 1


cdef int _sample_once(
    const uint64_t[:, ::1] words,
    int n,
    int r,
    int m,
    PhiloxState *s,
    int32_t *pool,
    int *pool_len,
    int32_t *scratch,
    int32_t *chosen,
    uint8_t *flags,
) noexcept nogil:
    """One staged sample; returns -1 on a degree-precondition failure."""
    cdef int i, t, j, v, fill, size, b_count, rest_count, p, q, idx
    cdef int32_t tmp
    cdef int32_t a_prev, b_prev

    pool_len[0] = n
    for v in range(n):
        pool[v] = v

    for i in range(r):
        # split pool into pending non-neighbours (b-set) and the rest,
        # both in ascending pool order
        rest_count = 0
        b_count = 0
        if i == 0:
            for t in range(pool_len[0]):
                scratch[rest_count] = pool[t]
                rest_count += 1
        else:
            a_prev = chosen[2 * i - 2]
            b_prev = chosen[2 * i - 1]
            for t in range(pool_len[0]):
                v = pool[t]
                if _adj(words, a_prev, v) and _adj(words, b_prev, v):
                    scratch[rest_count] = v
                    rest_count += 1
                else:
                    # store the b-set at the tail of the pool buffer
                    pool[b_count] = v  # safe: b_count <= t
                    b_count += 1
        fill = m - b_count
        if fill < 0:
            return -1
        size = rest_count
        for t in range(fill + m):
            j = t + <int> _bounded(s, <uint32_t> (size - t))
            tmp = scratch[t]
            scratch[t] = scratch[j]
            scratch[j] = tmp
        # halves: a1 = b-set (pool[0:b_count]) + scratch[0:fill]
        #         a2 = scratch[fill:fill+m]
        if _bounded(s, <uint32_t> m) != 0:
            flags[i] = 1
            if _bounded(s, 2) == 0:
                p = <int> _bounded(s, <uint32_t> m)
                q = <int> _bounded(s, <uint32_t> (m - 1))
                if q >= p:
                    q += 1
                chosen[2 * i] = pool[p] if p < b_count else scratch[p - b_count]
                chosen[2 * i + 1] = pool[q] if q < b_count else scratch[q - b_count]
            else:
                p = <int> _bounded(s, <uint32_t> m)
                q = <int> _bounded(s, <uint32_t> (m - 1))
                if q >= p:
                    q += 1
                chosen[2 * i] = scratch[fill + p]
                chosen[2 * i + 1] = scratch[fill + q]
        else:
            flags[i] = 0
            p = <int> _bounded(s, <uint32_t> m)
            chosen[2 * i] = pool[p] if p < b_count else scratch[p - b_count]
            q = <int> _bounded(s, <uint32_t> m)
            chosen[2 * i + 1] = scratch[fill + q]
        # remaining pool = scratch[fill+m : rest_count], ascending
        pool_len[0] = rest_count - (fill + m)
        for t in range(pool_len[0]):
            pool[t] = scratch[fill + m + t]
        # insertion sort (partial shuffle leaves the tail nearly sorted)
        for t in range(1, pool_len[0]):
            tmp = pool[t]
            j = t - 1
            while j >= 0 and pool[j] > tmp:
                pool[j + 1] = pool[j]
                j -= 1
            pool[j + 1] = tmp
    return 0


def sample_chosen(object adj_words, int n, int r, int m, object seed, object stream, int nsamples):
    """Chosen vertex sequences (stage order) and same-half flags."""
    cdef const uint64_t[:, ::1] words = adj_words
    cdef PhiloxState state
    _init_state(&state, <uint64_t> seed, <uint64_t> stream)

    chosen_arr = np.empty((nsamples, 2 * r), dtype=np.int32)
    flags_arr = np.empty((nsamples, r), dtype=np.uint8)
    pool_arr = np.empty(n, dtype=np.int32)
    scratch_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[:, ::1] chosen = chosen_arr
    cdef uint8_t[:, ::1] flags = flags_arr
    cdef int32_t[::1] pool = pool_arr
    cdef int32_t[::1] scratch = scratch_arr
    cdef int pool_len = 0
    cdef int status = 0
    cdef Py_ssize_t idx

    with nogil:
        for idx in range(nsamples):
            status = _sample_once(
                words, n, r, m, &state, &pool[0], &pool_len, &scratch[0],
                &chosen[idx, 0], &flags[idx, 0],
            )
            if status != 0:
                break
    if status != 0:
        raise ValueError(
            "minimum-degree precondition violated: more than m "
            "unconsidered non-neighbours at one stage"
        )
    return chosen_arr, flags_arr


def batch_stats(object adj_words, int n, int r, int m, object seed, object stream, int nsamples):
    """Aggregate Monte Carlo statistics; see the pure kernel docstring."""
    cdef const uint64_t[:, ::1] words = adj_words
    cdef PhiloxState state
    _init_state(&state, <uint64_t> seed, <uint64_t> stream)

    counts_arr = np.zeros(n * (n - 1) // 2, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    pool_arr = np.empty(n, dtype=np.int32)
    scratch_arr = np.empty(n, dtype=np.int32)
    chosen_arr = np.empty(2 * r, dtype=np.int32)
    flags_arr = np.empty(r, dtype=np.uint8)
    cdef int32_t[::1] pool = pool_arr
    cdef int32_t[::1] scratch = scratch_arr
    cdef int32_t[::1] chosen = chosen_arr
    cdef uint8_t[::1] flags = flags_arr

    cdef int pool_len = 0
    cdef int status = 0
    cdef int64_t sum_x2 = 0, sum_x2sq = 0, violations = 0, missing = 0
    cdef Py_ssize_t idx
    cdef int ai, bi, x2
    cdef int32_t u, v, a, b

    with nogil:
        for idx in range(nsamples):
            status = _sample_once(
                words, n, r, m, &state, &pool[0], &pool_len, &scratch[0],
                &chosen[0], &flags[0],
            )
            if status != 0:
                break
            x2 = 0
            for ai in range(r):
                x2 += flags[ai]
            sum_x2 += x2
            sum_x2sq += x2 * x2
            for ai in range(2 * r):
                u = chosen[ai]
                for bi in range(ai + 1, 2 * r):
                    v = chosen[bi]
                    if _adj(words, u, v):
                        if u < v:
                            a = u
                            b = v
                        else:
                            a = v
                            b = u
                        counts[a * (2 * n - a - 1) // 2 + (b - a - 1)] += 1
                    else:
                        missing += 1
                        if bi // 2 - ai // 2 >= 2:
                            violations += 1
    if status != 0:
        raise ValueError(
            "minimum-degree precondition violated: more than m "
            "unconsidered non-neighbours at one stage"
        )
    return counts_arr, int(sum_x2), int(sum_x2sq), int(violations), int(missing)
