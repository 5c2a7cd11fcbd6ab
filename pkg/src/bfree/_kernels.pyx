# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Contracts are documented in the pure-Python twin ``bfree._kernels_py``; the
two modules must stay behaviorally identical (same DFS order, same streaming
log-sum-exp, same tie-breaking), differing only in speed.
"""

from libc.math cimport exp2, log2, INFINITY
from libc.stdint cimport int64_t, uint64_t

BACKEND_NAME = "cython"

DEF MAX_ELEMS = 64
DEF MAX_N = 64


cdef inline uint64_t _full_mask(int b) noexcept:
    if b >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return ((<uint64_t>1) << b) - 1


cdef struct Ctx:
    int n
    int k_n
    int64_t nodes
    int64_t max_nodes
    int bs[MAX_ELEMS]
    uint64_t full[MAX_ELEMS]
    uint64_t masks[MAX_ELEMS]
    # partition-sum state
    double v[2][2]
    double m
    double acc
    double comp
    double best


cdef int64_t _count_rec(Ctx* c, int i) noexcept:
    cdef int64_t total, sub
    cdef int k, j, nchanged = 0
    cdef uint64_t bit, m
    cdef int changed[MAX_ELEMS]
    cdef bint ok = True
    c.nodes += 1
    if c.nodes > c.max_nodes:
        return -1
    if i == c.n:
        return 1
    total = _count_rec(c, i + 1)
    if total < 0:
        return -1
    for k in range(c.k_n):
        bit = (<uint64_t>1) << (i % c.bs[k])
        m = c.masks[k]
        if not (m & bit):
            if (m | bit) == c.full[k]:
                ok = False
                break
            c.masks[k] = m | bit
            changed[nchanged] = k
            nchanged += 1
    if ok:
        sub = _count_rec(c, i + 1)
        if sub < 0:
            for j in range(nchanged):
                k = changed[j]
                c.masks[k] ^= (<uint64_t>1) << (i % c.bs[k])
            return -1
        total += sub
    for j in range(nchanged):
        k = changed[j]
        c.masks[k] ^= (<uint64_t>1) << (i % c.bs[k])
    return total


cdef void _leaf(Ctx* c, int last, double bsum) noexcept:
    cdef double ext, x, y, t, scale
    cdef int k
    cdef uint64_t bit, m
    cdef bint one_ok = True
    ext = c.v[last][0]
    for k in range(c.k_n):
        m = c.masks[k]
        bit = (<uint64_t>1) << (c.n % c.bs[k])
        if not (m & bit) and (m | bit) == c.full[k]:
            one_ok = False
            break
    if one_ok and c.v[last][1] > ext:
        ext = c.v[last][1]
    x = bsum + ext
    if x > c.best:
        c.best = x
    if x <= c.m:
        y = exp2(x - c.m) - c.comp
        t = c.acc + y
        c.comp = (t - c.acc) - y
        c.acc = t
    else:
        if c.acc > 0.0:
            scale = exp2(c.m - x)
            c.acc *= scale
            c.comp *= scale
        y = 1.0 - c.comp
        t = c.acc + y
        c.comp = (t - c.acc) - y
        c.acc = t
        c.m = x


cdef bint _part_rec(Ctx* c, int i, int last, double bsum) noexcept:
    cdef int k, j, nchanged = 0
    cdef uint64_t bit, m
    cdef int changed[MAX_ELEMS]
    cdef bint ok = True, good
    cdef double nb
    c.nodes += 1
    if c.nodes > c.max_nodes:
        return False
    if i == c.n:
        _leaf(c, last, bsum)
        return True
    nb = bsum + c.v[last][0] if i > 0 else 0.0
    if not _part_rec(c, i + 1, 0, nb):
        return False
    for k in range(c.k_n):
        bit = (<uint64_t>1) << (i % c.bs[k])
        m = c.masks[k]
        if not (m & bit):
            if (m | bit) == c.full[k]:
                ok = False
                break
            c.masks[k] = m | bit
            changed[nchanged] = k
            nchanged += 1
    if ok:
        nb = bsum + c.v[last][1] if i > 0 else 0.0
        good = _part_rec(c, i + 1, 1, nb)
        for j in range(nchanged):
            k = changed[j]
            c.masks[k] ^= (<uint64_t>1) << (i % c.bs[k])
        if not good:
            return False
    else:
        for j in range(nchanged):
            k = changed[j]
            c.masks[k] ^= (<uint64_t>1) << (i % c.bs[k])
    return True


cdef int _setup(Ctx* c, int n, list bs, int64_t max_nodes, int limit) except -1:
    cdef int b, k = 0
    c.n = n
    c.nodes = 0
    c.max_nodes = max_nodes
    for b in bs:
        if b <= limit:
            if k >= MAX_ELEMS:
                raise ValueError("too many constraining elements")
            c.bs[k] = b
            c.full[k] = _full_mask(b)
            c.masks[k] = 0
            k += 1
    c.k_n = k
    return 0


def count_words(int n, bs, int64_t max_nodes):
    """Count admissible words of length n; None if the node budget is hit."""
    cdef Ctx c
    if n < 1 or n > MAX_N - 1:
        raise ValueError(f"kernel supports 1 <= n <= {MAX_N - 1}")
    _setup(&c, n, list(bs), max_nodes, n)
    cdef int64_t out = _count_rec(&c, 0)
    return None if out < 0 else out


def partition_stats(int n, bs, double v00, double v01, double v10, double v11,
                    int64_t max_nodes):
    """(log2 partition sum, max sup-Birkhoff) over admissible words."""
    cdef Ctx c
    if n < 1 or n > MAX_N - 1:
        raise ValueError(f"kernel supports 1 <= n <= {MAX_N - 1}")
    _setup(&c, n, list(bs), max_nodes, n + 1)
    c.v[0][0] = v00
    c.v[0][1] = v01
    c.v[1][0] = v10
    c.v[1][1] = v11
    c.m = -INFINITY
    c.acc = 0.0
    c.comp = 0.0
    c.best = -INFINITY
    if not _part_rec(&c, 0, 0, 0.0):
        return None
    return c.m + log2(c.acc), c.best


cdef inline int _popcount(uint64_t x) noexcept:
    cdef int cnt = 0
    while x:
        x &= x - 1
        cnt += 1
    return cnt


cdef inline bint _lex_less(uint64_t a, uint64_t b, int n) noexcept:
    cdef int j
    cdef uint64_t x, y
    for j in range(n):
        x = (a >> j) & 1
        y = (b >> j) & 1
        if x != y:
            return x < y
    return False


cdef struct MaxCtx:
    int n
    int k_n
    int64_t nodes
    int64_t max_nodes
    int bs[MAX_ELEMS]
    int offs[MAX_ELEMS + 1]
    uint64_t class_masks[4096]
    int best_count
    uint64_t best_mask


cdef bint _maxones_rec(MaxCtx* c, int k, uint64_t free) noexcept:
    cdef int cnt, r
    c.nodes += 1
    if c.nodes > c.max_nodes:
        return False
    cnt = _popcount(free)
    if cnt < c.best_count:
        return True
    if k == c.k_n:
        if cnt > c.best_count or (cnt == c.best_count and
                                  _lex_less(free, c.best_mask, c.n)):
            c.best_count = cnt
            c.best_mask = free
        return True
    for r in range(c.bs[k]):
        if not _maxones_rec(c, k + 1, free & ~c.class_masks[c.offs[k] + r]):
            return False
    return True


def max_ones_exact(int n, bs, int64_t max_nodes):
    """(max ones count, witness mask) over residue-class complements."""
    cdef MaxCtx c
    cdef int b, r, j, k = 0, off = 0
    cdef uint64_t m, window
    if n < 1 or n > MAX_N:
        raise ValueError(f"kernel supports 1 <= n <= {MAX_N}")
    window = _full_mask(n)
    c.n = n
    c.nodes = 0
    c.max_nodes = max_nodes
    for b in bs:
        if b <= n:
            if k >= MAX_ELEMS or off + b > 4096:
                raise ValueError("too many constraining elements")
            c.bs[k] = b
            c.offs[k] = off
            for r in range(b):
                m = 0
                j = r
                while j < n:
                    m |= (<uint64_t>1) << j
                    j += b
                c.class_masks[off + r] = m
            off += b
            k += 1
    c.k_n = k
    c.offs[k] = off
    c.best_count = -1
    c.best_mask = 0
    if not _maxones_rec(&c, 0, window):
        return None
    return c.best_count, int(c.best_mask)
