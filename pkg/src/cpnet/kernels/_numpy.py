"""Pure-numpy versions of the flip-graph kernels.

Same signatures and same outputs as ``_numba``; work is vectorized over a
whole BFS frontier (or all outcomes) at once instead of per outcome.
"""
import numpy as np


def _row_base(codes, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr):
    key = np.zeros(codes.shape[0], dtype=np.int64)
    for k in range(par_ptr[i], par_ptr[i + 1]):
        p = par_idx[k]
        key += ((codes // strides[p]) % sizes[p]) * par_stride[k]
    return rank_ptr[i] + key * sizes[i]


def successors(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank,
               codes, improving):
    """All one-flip moves from ``codes``.

    Returns ``(pos, targets)``: ``targets[e]`` is reached from ``codes[pos[e]]``;
    edges are ordered by source position, variable, then value.
    """
    pos_parts, tgt_parts = [], []
    idx = np.arange(codes.shape[0], dtype=np.int64)
    for i in range(sizes.shape[0]):
        base = _row_base(codes, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
        held = (codes // strides[i]) % sizes[i]
        held_rank = rank[base + held]
        for v in range(sizes[i]):
            r = rank[base + v]
            sel = r < held_rank if improving else r > held_rank
            pos_parts.append(idx[sel])
            tgt_parts.append(codes[sel] + (v - held[sel]) * strides[i])
    if not pos_parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    pos = np.concatenate(pos_parts)
    tgt = np.concatenate(tgt_parts)
    order = np.argsort(pos, kind="stable")
    return pos[order], tgt[order]


def bfs(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank,
        src, target, improving, pred):
    arrays = (sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank)
    frontier = np.array([src], dtype=np.int64)
    found = 0
    while frontier.size:
        pos, tgt = successors(*arrays, frontier, improving)
        origin = frontier[pos]
        keep = pred[tgt] == -1
        tgt, origin = tgt[keep], origin[keep]
        _, first = np.unique(tgt, return_index=True)
        first.sort()
        new = tgt[first]
        pred[new] = origin[first]
        if target >= 0:
            hit = np.flatnonzero(new == target)
            if hit.size:
                return found + int(hit[0]) + 1
        found += new.size
        frontier = new
    return found


def dominated_mask(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank):
    arrays = (sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank)
    total = int(np.prod(sizes))
    mark = np.zeros(total, dtype=np.bool_)
    _, tgt = successors(*arrays, np.arange(total, dtype=np.int64), False)
    frontier = np.unique(tgt)
    mark[frontier] = True
    while frontier.size:
        _, tgt = successors(*arrays, frontier, False)
        tgt = np.unique(tgt[~mark[tgt]])
        mark[tgt] = True
        frontier = tgt
    return mark


def top_mask(sizes, strides, par_ptr, par_idx, par_stride, rank_ptr, rank):
    total = int(np.prod(sizes))
    codes = np.arange(total, dtype=np.int64)
    out = np.ones(total, dtype=np.bool_)
    for i in range(sizes.shape[0]):
        base = _row_base(codes, i, sizes, strides, par_ptr, par_idx, par_stride, rank_ptr)
        out &= rank[base + (codes // strides[i]) % sizes[i]] == 0
    return out
