"""Maximum-weight perfect bipartite matching with dual-variable scaling.

Rows are matched to columns maximizing the product of matched absolute
values.  Works on the transformed costs c_ij = log(max_row |a|) - log|a_ij|
(all >= 0) with successive shortest augmenting paths (Dijkstra with
potentials).  The duals (u, v) yield row/column scalings that bring every
matched entry to exactly +-1 and bound the rest by 1 in magnitude.

Zero-valued stored entries carry infinite cost and are never matched.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _heap_push(keys, idxs, size, key, idx):
    pos = size
    keys[pos] = key
    idxs[pos] = idx
    while pos > 0:
        parent = (pos - 1) >> 1
        if keys[parent] <= keys[pos]:
            break
        keys[parent], keys[pos] = keys[pos], keys[parent]
        idxs[parent], idxs[pos] = idxs[pos], idxs[parent]
        pos = parent
    return size + 1


@njit(cache=True)
def _heap_pop(keys, idxs, size):
    top_key = keys[0]
    top_idx = idxs[0]
    size -= 1
    if size > 0:
        keys[0] = keys[size]
        idxs[0] = idxs[size]
        pos = 0
        while True:
            left = 2 * pos + 1
            if left >= size:
                break
            child = left
            right = left + 1
            if right < size and keys[right] < keys[left]:
                child = right
            if keys[pos] <= keys[child]:
                break
            keys[pos], keys[child] = keys[child], keys[pos]
            idxs[pos], idxs[child] = idxs[child], idxs[pos]
            pos = child
    return top_key, top_idx, size


@njit(cache=True)
def _match_core(n, row_ptr, col_idx, cost, row_match, col_match, u, v):
    """Successive shortest augmenting paths.  Returns number of matched rows."""
    inf = np.inf
    # greedy pass on zero-reduced-cost edges
    matched = 0
    for i in range(n):
        for t in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[t]
            if col_match[j] == -1 and cost[t] == 0.0:
                col_match[j] = i
                row_match[i] = j
                matched += 1
                break

    dist = np.full(n, inf)
    touched = np.empty(n, np.int64)       # cols with non-inf dist, for reset
    parent_row = np.empty(n, np.int64)    # row through which each col was reached
    done = np.zeros(n, np.uint8)
    final_list = np.empty(n, np.int64)
    heap_keys = np.empty(len(col_idx) + n + 4, np.float64)
    heap_idxs = np.empty(len(col_idx) + n + 4, np.int64)

    for r0 in range(n):
        if row_match[r0] != -1:
            continue
        hsize = 0
        ntouched = 0
        nfinal = 0
        sink = -1
        sink_dist = inf
        row = r0
        dstart = 0.0
        while True:
            # scan the current row's edges
            for t in range(row_ptr[row], row_ptr[row + 1]):
                j = col_idx[t]
                if done[j]:
                    continue
                c = cost[t]
                if c == inf:
                    continue
                nd = dstart + c - u[row] - v[j]
                if nd < dstart:
                    nd = dstart  # guard monotonicity against rounding
                if nd < dist[j]:
                    if dist[j] == inf:
                        touched[ntouched] = j
                        ntouched += 1
                    dist[j] = nd
                    parent_row[j] = row
                    hsize = _heap_push(heap_keys, heap_idxs, hsize, nd, j)
            # pick the closest unfinalized column
            j = -1
            d = inf
            while hsize > 0:
                d, j, hsize = _heap_pop(heap_keys, heap_idxs, hsize)
                if not done[j] and d == dist[j]:
                    break
                j = -1
            if j == -1:
                break  # no augmenting path
            done[j] = 1
            final_list[nfinal] = j
            nfinal += 1
            if col_match[j] == -1:
                sink = j
                sink_dist = d
                break
            row = col_match[j]
            dstart = d

        if sink == -1:
            # leave this row unmatched; keep going so the final matching is
            # maximum and the unmatched column set is the true deficiency
            for t in range(ntouched):
                jj = touched[t]
                dist[jj] = inf
                done[jj] = 0
            continue
        # dual update on finalized columns
        for t in range(nfinal):
            jj = final_list[t]
            v[jj] += dist[jj] - sink_dist
        # augment along parent rows
        j = sink
        while True:
            i = parent_row[j]
            prev_j = row_match[i]
            row_match[i] = j
            col_match[j] = i
            if i == r0:
                break
            j = prev_j
        matched += 1
        # refresh row potentials of rows matched to finalized columns
        for t in range(nfinal):
            jj = final_list[t]
            i = col_match[jj]
            if i != -1:
                # find the cost of edge (i, jj)
                for tt in range(row_ptr[i], row_ptr[i + 1]):
                    if col_idx[tt] == jj:
                        u[i] = cost[tt] - v[jj]
                        break
        # reset scratch state
        for t in range(ntouched):
            jj = touched[t]
            dist[jj] = inf
            done[jj] = 0
    return matched


def max_weight_match(n, row_ptr, col_idx, values):
    """Match every column to a row maximizing prod |a_{sigma(j), j}|.

    Returns (row_perm, dr, dc, unmatched_cols).  ``row_perm[j]`` is the
    original row matched to column j; ``unmatched_cols`` is empty on success.
    """
    row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int64)
    col_idx = np.ascontiguousarray(col_idx, dtype=np.int64)
    absval = np.abs(np.ascontiguousarray(values, dtype=np.float64))

    # per-row maxima over nonzero magnitudes
    rmax = np.zeros(n)
    rows = np.repeat(np.arange(n), np.diff(row_ptr))
    if len(absval):
        np.maximum.at(rmax, rows, absval)

    cost = np.full(len(absval), np.inf)
    nz = absval > 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(absval, where=nz, out=np.full_like(absval, -np.inf))
    cost[nz] = np.log(rmax[rows[nz]]) - logs[nz]

    row_match = np.full(n, -1, dtype=np.int64)
    col_match = np.full(n, -1, dtype=np.int64)
    u = np.zeros(n)
    v = np.zeros(n)
    matched = _match_core(n, row_ptr, col_idx, cost, row_match, col_match, u, v)
    if matched < n:
        unmatched = np.flatnonzero(col_match == -1)
        return col_match, None, None, unmatched

    # scalings from the duals; dc normalized so matched entries hit exactly 1
    with np.errstate(over="raise"):
        dr = np.exp(u - np.log(rmax))
    dc = np.empty(n)
    for j in range(n):
        i = col_match[j]
        lo, hi = row_ptr[i], row_ptr[i + 1]
        t = lo + np.searchsorted(col_idx[lo:hi], j)
        dc[j] = 1.0 / (dr[i] * absval[t])
    return col_match, dr, dc, np.empty(0, dtype=np.int64)
