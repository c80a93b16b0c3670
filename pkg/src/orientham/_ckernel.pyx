# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.  Same contract as ``_pykernel``; masks are limited to 64 vertices."""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

FOUND, NONE, BUDGET = 0, 1, 2

cdef extern from * nogil:
    int popcount "__builtin_popcountll"(unsigned long long)
    int ctz "__builtin_ctzll"(unsigned long long)


cdef struct Ctx:
    int n
    int t
    int hamilton
    int anchor
    uint64_t allowed
    uint64_t* outm
    uint64_t* inm
    uint64_t* adj
    int* need  # 3 ints per depth


cdef bint feasible(Ctx* c, int d, int w, uint64_t used) nogil:
    cdef uint64_t pool = c.allowed & ~used
    cdef uint64_t anchor_bit = (<uint64_t>1) << c.anchor
    cdef int remaining = c.t - 1 - d
    if popcount(pool) < remaining:
        return False
    cdef uint64_t reach = pool | ((<uint64_t>1) << w) | anchor_bit
    cdef int sinks = 0, sources = 0, normals = 0
    cdef uint64_t m = pool
    cdef int x, ci, co
    while m:
        x = ctz(m)
        m &= m - 1
        ci = popcount(c.inm[x] & reach)
        co = popcount(c.outm[x] & reach)
        if c.hamilton and ci + co < 2:
            return False
        if ci >= 2:
            sinks += 1
        if co >= 2:
            sources += 1
        if ci and co:
            normals += 1
    if sinks < c.need[3 * d] or sources < c.need[3 * d + 1] or normals < c.need[3 * d + 2]:
        return False
    cdef uint64_t region = pool | anchor_bit
    cdef uint64_t seen = (<uint64_t>1) << w
    cdef uint64_t frontier = seen
    cdef uint64_t nxt
    while frontier:
        nxt = 0
        m = frontier
        while m:
            nxt |= c.adj[ctz(m)]
            m &= m - 1
        frontier = nxt & region & ~seen
        seen |= frontier
    if c.hamilton:
        return (region & ~seen) == 0
    return (seen & anchor_bit) != 0


def cycle_search(out_masks, in_masks, signs, int anchor, allowed, bint hamilton, long long budget):
    cdef int n = len(out_masks)
    cdef int t = len(signs)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    cdef Ctx c
    c.n = n
    c.t = t
    c.hamilton = hamilton
    c.anchor = anchor
    c.allowed = <uint64_t>allowed
    c.outm = <uint64_t*>malloc(n * sizeof(uint64_t))
    c.inm = <uint64_t*>malloc(n * sizeof(uint64_t))
    c.adj = <uint64_t*>malloc(n * sizeof(uint64_t))
    c.need = <int*>malloc(3 * t * sizeof(int))
    cdef int* sg = <int*>malloc(t * sizeof(int))
    cdef int* seq = <int*>malloc(t * sizeof(int))
    cdef uint64_t* cand = <uint64_t*>malloc(t * sizeof(uint64_t))
    cdef int v, j, d, w
    cdef int sink = 0, source = 0, normal = 0
    cdef long long nodes = 0
    cdef uint64_t used, close, low, cc, nxt
    cdef int status = 1
    try:
        for v in range(n):
            c.outm[v] = <uint64_t>out_masks[v]
            c.inm[v] = <uint64_t>in_masks[v]
            c.adj[v] = c.outm[v] | c.inm[v]
        for j in range(t):
            sg[j] = 1 if signs[j] > 0 else -1
        for j in range(t - 1, 0, -1):
            c.need[3 * j] = sink
            c.need[3 * j + 1] = source
            c.need[3 * j + 2] = normal
            if sg[j - 1] > 0 and sg[j] < 0:
                sink += 1
            elif sg[j - 1] < 0 and sg[j] > 0:
                source += 1
            else:
                normal += 1
        c.need[0] = sink
        c.need[1] = source
        c.need[2] = normal

        close = c.inm[anchor] if sg[t - 1] > 0 else c.outm[anchor]
        used = (<uint64_t>1) << anchor
        seq[0] = anchor
        cand[1] = (c.outm[anchor] if sg[0] > 0 else c.inm[anchor]) & c.allowed & ~used
        if t == 2:
            cand[1] &= close
        d = 1
        with nogil:
            while d > 0:
                cc = cand[d]
                if cc == 0:
                    d -= 1
                    if d > 0:
                        used ^= (<uint64_t>1) << seq[d]
                    continue
                low = cc & (~cc + 1)
                cand[d] = cc ^ low
                w = ctz(low)
                nodes += 1
                if nodes > budget:
                    nodes -= 1
                    status = 2
                    break
                seq[d] = w
                if d == t - 1:
                    status = 0
                    break
                used |= low
                if not feasible(&c, d, w, used):
                    used ^= low
                    continue
                nxt = (c.outm[w] if sg[d] > 0 else c.inm[w]) & c.allowed & ~used
                if d + 1 == t - 1:
                    nxt &= close
                d += 1
                cand[d] = nxt
        if status == 0:
            return FOUND, nodes, [seq[j] for j in range(t)]
        if status == 2:
            return BUDGET, nodes, None
        return NONE, nodes, None
    finally:
        free(c.outm)
        free(c.inm)
        free(c.adj)
        free(c.need)
        free(sg)
        free(seq)
        free(cand)


def expander_scan(in_masks, int n, int kmin, int kmax, int threshold, double extra):
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 vertices")
    cdef uint64_t* inm = <uint64_t*>malloc(max(n, 1) * sizeof(uint64_t))
    cdef int v, k, size
    cdef uint64_t s, low, ripple, full
    cdef long long tested = 0
    cdef bint hit = False
    full = (~(<uint64_t>0)) if n == 64 else (((<uint64_t>1) << n) - 1)
    try:
        for v in range(n):
            inm[v] = <uint64_t>in_masks[v]
        if kmin < 1:
            kmin = 1
        if kmax > n:
            kmax = n
        with nogil:
            for k in range(kmin, kmax + 1):
                s = full if k == 64 else (((<uint64_t>1) << k) - 1)
                while True:
                    tested += 1
                    size = 0
                    for v in range(n):
                        if popcount(inm[v] & s) >= threshold:
                            size += 1
                    if size < k + extra:
                        hit = True
                        break
                    if s == full or k == n:
                        break
                    low = s & (~s + 1)
                    ripple = s + low
                    if ripple == 0 or ripple > full:
                        break
                    s = (((ripple ^ s) >> 2) // low) | ripple
                    if s > full:
                        break
                if hit:
                    break
        if hit:
            return int(s), tested
        return -1, tested
    finally:
        free(inm)
