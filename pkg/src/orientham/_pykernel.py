"""Pure-Python search kernels.  ``_ckernel.pyx`` mirrors this file line for line."""
from __future__ import annotations

FOUND, NONE, BUDGET = 0, 1, 2


def _position_needs(signs):
    t = len(signs)
    # needs[d] = (sinks, sources, normals) among positions d+1 .. t-1
    needs = [(0, 0, 0)] * t
    sink = source = normal = 0
    for j in range(t - 1, 0, -1):
        needs[j] = (sink, source, normal)
        a, b = signs[j - 1], signs[j]
        if a > 0 and b < 0:
            sink += 1
        elif a < 0 and b > 0:
            source += 1
        else:
            normal += 1
    needs[0] = (sink, source, normal)
    return needs


def cycle_search(out_masks, in_masks, signs, anchor, allowed, hamilton, budget):
    """Depth-first search for a cycle realizing ``signs`` with ``v_0 = anchor``.

    Returns ``(status, nodes, sequence)``.  ``allowed`` masks the vertices that
    may appear; in Hamilton mode every allowed vertex must be used.
    """
    t = len(signs)
    n = len(out_masks)
    adj = [out_masks[v] | in_masks[v] for v in range(n)]
    needs = _position_needs(signs)
    close = in_masks[anchor] if signs[t - 1] > 0 else out_masks[anchor]
    anchor_bit = 1 << anchor
    seq = [anchor] + [0] * (t - 1)
    cand = [0] * t
    used = anchor_bit
    nodes = 0

    def feasible(d, w, used):
        pool = allowed & ~used
        remaining = t - 1 - d
        if pool.bit_count() < remaining:
            return False
        reach = pool | (1 << w) | anchor_bit
        sinks = sources = normals = 0
        m = pool
        while m:
            low = m & -m
            x = low.bit_length() - 1
            m ^= low
            ci = (in_masks[x] & reach).bit_count()
            co = (out_masks[x] & reach).bit_count()
            if hamilton and ci + co < 2:
                return False
            if ci >= 2:
                sinks += 1
            if co >= 2:
                sources += 1
            if ci and co:
                normals += 1
        need_sink, need_source, need_normal = needs[d]
        if sinks < need_sink or sources < need_source or normals < need_normal:
            return False
        region = pool | anchor_bit
        seen = 1 << w
        frontier = seen
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= adj[low.bit_length() - 1]
                m ^= low
            frontier = nxt & region & ~seen
            seen |= frontier
        if hamilton:
            return (region & ~seen) == 0
        return bool(seen & anchor_bit)

    first = (out_masks[anchor] if signs[0] > 0 else in_masks[anchor]) & allowed & ~used
    if t == 2:
        first &= close
    cand[1] = first
    d = 1
    while d > 0:
        c = cand[d]
        if not c:
            d -= 1
            if d > 0:
                used ^= 1 << seq[d]
            continue
        low = c & -c
        cand[d] = c ^ low
        w = low.bit_length() - 1
        nodes += 1
        if nodes > budget:
            return BUDGET, nodes - 1, None
        seq[d] = w
        if d == t - 1:
            return FOUND, nodes, list(seq)
        used |= low
        if not feasible(d, w, used):
            used ^= low
            continue
        nxt = (out_masks[w] if signs[d] > 0 else in_masks[w]) & allowed & ~used
        if d + 1 == t - 1:
            nxt &= close
        d += 1
        cand[d] = nxt
    return NONE, nodes, None


def expander_scan(in_masks, n, kmin, kmax, threshold, extra):
    """First set ``S`` (by size, then Gosper order) with ``|RN(S)| < |S| + extra``.

    ``RN(S)`` holds the vertices with at least ``threshold`` in-neighbours in
    ``S``.  Returns ``(mask or -1, number of sets tested)``.
    """
    tested = 0
    full = (1 << n) - 1
    for k in range(max(kmin, 1), min(kmax, n) + 1):
        s = (1 << k) - 1
        while s <= full:
            tested += 1
            size = 0
            for v in range(n):
                if (in_masks[v] & s).bit_count() >= threshold:
                    size += 1
            if size < k + extra:
                return s, tested
            low = s & -s
            ripple = s + low
            s = (((ripple ^ s) >> 2) // low) | ripple
    return -1, tested
