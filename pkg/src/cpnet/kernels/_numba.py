"""numba-compiled flip-graph kernels.

All kernels take the seven arrays of a ``PackedNet`` in order, see
``cpnet.core.PackedNet.arrays``.  Successors of an outcome are enumerated by
ascending variable index, then ascending value index.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _row_base(code, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr):
    key = 0
    for k in range(par_ptr[i], par_ptr[i + 1]):
        p = par_idx[k]
        key += ((code // strides[p]) % sizes[p]) * par_stride[k]
    return rank_ptr[i] + key * sizes[i]


@njit(cache=True)
def bfs(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank,
        src, target, improving, pred):
    """Breadth-first search from ``src`` over worsening (or improving) flips.

    ``pred`` must be filled with -1; on return it holds the BFS predecessor of
    every discovered outcome.  ``src`` is only marked if reached again through
    a cycle.  Stops early once ``target`` (>= 0) is discovered.  Returns the
    number of discovered outcomes.
    """
    n = sizes.shape[0]
    queue = np.empty(pred.shape[0] + 1, dtype=np.int64)
    queue[0] = src
    head = 0
    tail = 1
    found = 0
    while head < tail:
        code = queue[head]
        head += 1
        for i in range(n):
            base = _row_base(code, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
            held = (code // strides[i]) % sizes[i]
            held_rank = rank[base + held]
            for v in range(sizes[i]):
                r = rank[base + v]
                if (improving and r < held_rank) or (not improving and r > held_rank):
                    nxt = code + (v - held) * strides[i]
                    if pred[nxt] == -1:
                        pred[nxt] = code
                        found += 1
                        if nxt == target:
                            return found
                        queue[tail] = nxt
                        tail += 1
    return found


@njit(cache=True)
def dominated_mask(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank):
    """Mark every outcome that ends some chain of one or more worsening flips.

    The worsening-flip digraph is materialized in CSR form first; marking
    then propagates breadth-first from all edge targets.
    """
    n = sizes.shape[0]
    total = 1
    for i in range(n):
        total *= sizes[i]
    deg = np.zeros(total + 1, dtype=np.int64)
    for code in range(total):
        for i in range(n):
            base = _row_base(code, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
            held_rank = rank[base + (code // strides[i]) % sizes[i]]
            for v in range(sizes[i]):
                if rank[base + v] > held_rank:
                    deg[code + 1] += 1
    for code in range(total):
        deg[code + 1] += deg[code]
    targets = np.empty(deg[total], dtype=np.int64)
    for code in range(total):
        pos = deg[code]
        for i in range(n):
            base = _row_base(code, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
            held = (code // strides[i]) % sizes[i]
            held_rank = rank[base + held]
            for v in range(sizes[i]):
                if rank[base + v] > held_rank:
                    targets[pos] = code + (v - held) * strides[i]
                    pos += 1

    mark = np.zeros(total, dtype=np.bool_)
    queue = np.empty(total, dtype=np.int64)
    tail = 0
    for e in range(targets.shape[0]):
        t = targets[e]
        if not mark[t]:
            mark[t] = True
            queue[tail] = t
            tail += 1
    head = 0
    while head < tail:
        code = queue[head]
        head += 1
        for e in range(deg[code], deg[code + 1]):
            t = targets[e]
            if not mark[t]:
                mark[t] = True
                queue[tail] = t
                tail += 1
    return mark


@njit(cache=True)
def top_mask(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank):
    """Outcomes in which every variable holds the top value of its row."""
    n = sizes.shape[0]
    total = 1
    for i in range(n):
        total *= sizes[i]
    out = np.ones(total, dtype=np.bool_)
    for code in range(total):
        for i in range(n):
            base = _row_base(code, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
            if rank[base + (code // strides[i]) % sizes[i]] != 0:
                out[code] = False
                break
    return out
