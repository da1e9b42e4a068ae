"""Approximate minimum degree ordering on a quotient graph.

Implements the classic scheme: elements replace eliminated supervariables,
degrees are approximated by the Amestoy/Davis/Duff external-degree bound,
elements fully covered by the new pivot element are absorbed aggressively,
and indistinguishable variables are detected by hashing and eliminated in
mass.  Pivot selection breaks degree ties by smallest original index via a
lazy binary heap keyed on (degree, index).

State is flat int64 arrays so the whole elimination loop JIT-compiles.
"""

import numpy as np
from numba import njit

# entity states
_VAR = 0
_ELEMENT = 1
_ABSORBED = 2
_DEAD = 3


@njit(cache=True)
def _sift_down(keys, size, pos):
    while True:
        left = 2 * pos + 1
        if left >= size:
            return
        child = left
        right = left + 1
        if right < size and keys[right] < keys[left]:
            child = right
        if keys[pos] <= keys[child]:
            return
        keys[pos], keys[child] = keys[child], keys[pos]
        pos = child


@njit(cache=True)
def _amd_core(n, ap, ai, iwlen):
    nz = len(ai)
    iw = np.empty(iwlen, np.int64)
    iw[:nz] = ai
    pe = np.empty(n, np.int64)
    ln = np.empty(n, np.int64)
    elen = np.zeros(n, np.int64)
    nv = np.ones(n, np.int64)
    degree = np.empty(n, np.int64)
    state = np.zeros(n, np.int64)
    absorbed_into = np.full(n, -1, np.int64)
    for i in range(n):
        pe[i] = ap[i]
        ln[i] = ap[i + 1] - ap[i]
        degree[i] = ln[i]
    pfree = nz

    # scratch
    mark = np.zeros(n, np.int64)        # L_p membership stamp
    wmark = np.zeros(n, np.int64)       # element w-value stamp
    w = np.zeros(n, np.int64)           # |L_e \ L_p| values
    hkey = np.zeros(n, np.int64)
    hhead = np.full(n, -1, np.int64)
    hstamp = np.zeros(n, np.int64)
    hnext = np.full(n, -1, np.int64)
    lbuf = np.empty(n + 1, np.int64)    # list rebuild scratch
    bucket = np.empty(n, np.int64)
    stamp = 0

    # lazy heap keyed by degree * (n + 1) + index
    hcap = 4 * n + 2 * nz + 16
    heap = np.empty(hcap, np.int64)
    hsize = 0
    base = n + 1
    for i in range(n):
        heap[hsize] = degree[i] * base + i
        hsize += 1
    # initial array is already a valid heap only if sorted; heapify
    for pos in range(hsize // 2 - 1, -1, -1):
        _sift_down(heap, hsize, pos)

    elim_order = np.empty(n, np.int64)
    n_elim = 0
    nel = 0

    while nel < n:
        # --- pick pivot: smallest (degree, index) among live variables
        p = -1
        while hsize > 0:
            key = heap[0]
            hsize -= 1
            heap[0] = heap[hsize]
            _sift_down(heap, hsize, 0)
            cand = key % base
            d = key // base
            if state[cand] == _VAR and nv[cand] > 0 and degree[cand] == d:
                p = cand
                break
        if p == -1:
            # heap exhausted: re-seed with all live variables (defensive; a
            # live variable always has a fresh heap entry in normal operation)
            hsize = 0
            for i in range(n):
                if state[i] == _VAR and nv[i] > 0:
                    heap[hsize] = degree[i] * base + i
                    hsize += 1
            if hsize == 0:
                return elim_order[:0], absorbed_into  # signals failure
            for pos in range(hsize // 2 - 1, -1, -1):
                _sift_down(heap, hsize, pos)
            continue

        # --- form the pivot element L_p = (A_p u union of its elements) \ dead
        bound = ln[p]
        for t in range(pe[p], pe[p] + elen[p]):
            e = iw[t]
            if state[e] == _ELEMENT:
                bound += ln[e]
        if pfree + bound + 1 > iwlen:
            # garbage collect: compact live lists front-to-back by pe order
            order = np.argsort(pe)
            dst = 0
            for oi in range(n):
                idx = order[oi]
                alive = (state[idx] == _VAR and nv[idx] > 0) or state[idx] == _ELEMENT
                if not alive or ln[idx] == 0:
                    continue
                src = pe[idx]
                pe[idx] = dst
                for t in range(ln[idx]):
                    iw[dst + t] = iw[src + t]
                dst += ln[idx]
            pfree = dst
            if pfree + bound + 1 > iwlen:
                iwlen = max(2 * iwlen, pfree + bound + n)
                bigger = np.empty(iwlen, np.int64)
                bigger[:pfree] = iw[:pfree]
                iw = bigger

        stamp += 1
        mark[p] = stamp
        start = pfree
        cnt = 0
        degp = 0
        for t in range(pe[p], pe[p] + elen[p]):
            e = iw[t]
            if state[e] != _ELEMENT:
                continue
            for tt in range(pe[e], pe[e] + ln[e]):
                x = iw[tt]
                if state[x] == _VAR and nv[x] > 0 and mark[x] != stamp:
                    mark[x] = stamp
                    iw[start + cnt] = x
                    cnt += 1
                    degp += nv[x]
            state[e] = _DEAD
        for t in range(pe[p] + elen[p], pe[p] + ln[p]):
            x = iw[t]
            if state[x] == _VAR and nv[x] > 0 and mark[x] != stamp:
                mark[x] = stamp
                iw[start + cnt] = x
                cnt += 1
                degp += nv[x]

        nel += nv[p]
        elim_order[n_elim] = p
        n_elim += 1
        state[p] = _ELEMENT
        pe[p] = start
        ln[p] = cnt
        elen[p] = 0
        degree[p] = degp
        pfree = start + cnt
        if cnt == 0:
            state[p] = _DEAD
            continue

        # --- w[e] = |L_e \ L_p| for elements adjacent to members of L_p
        for t in range(start, start + cnt):
            x = iw[t]
            for tt in range(pe[x], pe[x] + elen[x]):
                e = iw[tt]
                if state[e] != _ELEMENT or e == p:
                    continue
                if wmark[e] != stamp:
                    wmark[e] = stamp
                    w[e] = degree[e]
                w[e] -= nv[x]

        # --- prune member lists, approximate degrees, absorb elements
        for t in range(start, start + cnt):
            x = iw[t]
            newlen = 0
            deg = 0
            hs = np.int64(p)
            for tt in range(pe[x], pe[x] + elen[x]):
                e = iw[tt]
                if state[e] != _ELEMENT or e == p:
                    continue
                if w[e] == 0 and wmark[e] == stamp:
                    state[e] = _DEAD  # aggressive absorption into p
                    continue
                lbuf[newlen] = e
                newlen += 1
                deg += w[e]
                hs += e
            nelems = newlen + 1
            lbuf[newlen] = p
            newlen += 1
            for tt in range(pe[x] + elen[x], pe[x] + ln[x]):
                y = iw[tt]
                if state[y] != _VAR or nv[y] <= 0 or mark[y] == stamp:
                    continue
                lbuf[newlen] = y
                newlen += 1
                deg += nv[y]
                hs += y
            for tt in range(newlen):
                iw[pe[x] + tt] = lbuf[tt]
            elen[x] = nelems
            ln[x] = newlen
            ext = degp - nv[x]
            d = n - nel - nv[x]
            if degree[x] + ext < d:
                d = degree[x] + ext
            if deg + ext < d:
                d = deg + ext
            if d < 0:
                d = 0
            degree[x] = d
            hkey[x] = hs % n

        # --- supervariable detection (hash buckets, exact list compare)
        bstamp = stamp
        for t in range(start, start + cnt):
            x = iw[t]
            h = hkey[x]
            if hstamp[h] != bstamp:
                hstamp[h] = bstamp
                hhead[h] = x
                hnext[x] = -1
            else:
                hnext[x] = hhead[h]
                hhead[h] = x
        for t in range(start, start + cnt):
            x = iw[t]
            h = hkey[x]
            if hstamp[h] == bstamp:
                # gather bucket members, ascending by index
                bcount = 0
                y = hhead[h]
                while y != -1:
                    bucket[bcount] = y
                    bcount += 1
                    y = hnext[y]
                hstamp[h] = 0  # bucket consumed
                if bcount < 2:
                    continue
                bucket[:bcount].sort()
                for a in range(bcount):
                    xa = bucket[a]
                    if nv[xa] <= 0 or state[xa] != _VAR:
                        continue
                    for b in range(a + 1, bcount):
                        xb = bucket[b]
                        if nv[xb] <= 0 or state[xb] != _VAR:
                            continue
                        if elen[xa] != elen[xb] or ln[xa] != ln[xb]:
                            continue
                        # exact compare via stamping xa's list
                        stamp += 1
                        same = True
                        for tt in range(pe[xa], pe[xa] + ln[xa]):
                            mark[iw[tt]] = stamp
                        for tt in range(pe[xb], pe[xb] + ln[xb]):
                            if mark[iw[tt]] != stamp:
                                same = False
                                break
                        if same:
                            wb = nv[xb]
                            nv[xa] += wb
                            nv[xb] = 0
                            state[xb] = _ABSORBED
                            absorbed_into[xb] = xa
                            degree[xa] -= wb
                            ln[xb] = 0

        # --- compact L_p and finalize the element degree
        cnt2 = 0
        degp2 = 0
        for t in range(start, start + cnt):
            x = iw[t]
            if state[x] == _VAR and nv[x] > 0:
                iw[start + cnt2] = x
                cnt2 += 1
                degp2 += nv[x]
        ln[p] = cnt2
        degree[p] = degp2
        pfree = start + cnt2
        if cnt2 == 0:
            state[p] = _DEAD

        # --- push refreshed keys
        for t in range(start, start + cnt2):
            x = iw[t]
            if hsize >= hcap:
                # compact the heap: keep one fresh entry per live variable
                stamp += 1
                kept = 0
                for hh in range(hsize):
                    cand = heap[hh] % base
                    d = heap[hh] // base
                    if state[cand] == _VAR and nv[cand] > 0 and degree[cand] == d \
                            and mark[cand] != stamp:
                        mark[cand] = stamp
                        heap[kept] = heap[hh]
                        kept += 1
                hsize = kept
                for pos in range(hsize // 2 - 1, -1, -1):
                    _sift_down(heap, hsize, pos)
            key = degree[x] * base + x
            pos = hsize
            heap[pos] = key
            hsize += 1
            while pos > 0:
                parent = (pos - 1) >> 1
                if heap[parent] <= heap[pos]:
                    break
                heap[parent], heap[pos] = heap[pos], heap[parent]
                pos = parent

    return elim_order[:n_elim], absorbed_into


def amd_permutation(n, ap, ai):
    """Run AMD on a strictly off-diagonal symmetric pattern.

    Returns the fill-reducing permutation: position k holds the original
    index eliminated k-th.  Indistinguishable variables eliminated in mass
    appear consecutively, ascending.
    """
    ap = np.ascontiguousarray(ap, dtype=np.int64)
    ai = np.ascontiguousarray(ai, dtype=np.int64)
    iwlen = 2 * (len(ai) + n) + 64
    elim_order, absorbed_into = _amd_core(n, ap, ai, iwlen)
    if len(elim_order) == 0 and n > 0:
        raise RuntimeError("AMD elimination failed to complete (internal bug)")

    # resolve absorption chains to final principals
    root = absorbed_into.copy()
    for i in range(n):
        r = i
        seen = 0
        while root[r] != -1:
            r = root[r]
            seen += 1
            if seen > n:
                raise RuntimeError("absorption cycle (internal bug)")
        root[i] = r if root[i] != -1 else -1

    groups = {int(p): [int(p)] for p in elim_order}
    for i in range(n):
        if root[i] != -1:
            groups[int(root[i])].append(i)
    perm = np.empty(n, dtype=np.int64)
    k = 0
    for p in elim_order:
        members = sorted(groups[int(p)])
        for m in members:
            perm[k] = m
            k += 1
    if k != n:
        raise RuntimeError("AMD output is not a complete permutation (internal bug)")
    return perm
