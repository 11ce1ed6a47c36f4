"""Directed 3-opt: cut a route in three places and reconnect the two middle
segments in any order and orientation, keeping only arc-feasible results."""

from __future__ import annotations

import math

from .core import IMPROVE_TOL

INF = math.inf

# (first segment, second segment, reverse first?, reverse second?)
_MOVES = [
    ("A", "B", False, True),
    ("A", "B", True, False),
    ("A", "B", True, True),
    ("B", "A", False, False),
    ("B", "A", False, True),
    ("B", "A", True, False),
    ("B", "A", True, True),
]


def _prefix(seq, d):
    """Forward and backward prefix costs plus prefix counts of missing arcs."""
    n = len(seq)
    fwd = [0.0] * n
    bwd = [0.0] * n
    miss_b = [0] * n
    for q in range(1, n):
        fwd[q] = fwd[q - 1] + d[seq[q - 1]][seq[q]]
        back = d[seq[q]][seq[q - 1]]
        if back == INF:
            bwd[q] = bwd[q - 1]
            miss_b[q] = miss_b[q - 1] + 1
        else:
            bwd[q] = bwd[q - 1] + back
            miss_b[q] = miss_b[q - 1]
    return fwd, bwd, miss_b


def best_move(seq, d):
    """Best improving reconnection as (gain, new sequence), or None."""
    n = len(seq)
    if n < 4:  # fewer than two interior vertices cannot be rearranged
        return None
    fwd, bwd, miss = _prefix(seq, d)
    total = fwd[-1]
    best_gain, best_seq = IMPROVE_TOL, None

    def inner(lo, hi, rev):
        # cost of traversing seq[lo:hi] (hi exclusive), inf if an arc is missing
        if rev:
            if miss[hi - 1] - miss[lo]:
                return INF
            return bwd[hi - 1] - bwd[lo]
        return fwd[hi - 1] - fwd[lo]

    # S0 = seq[:i], A = seq[i:j], B = seq[j:k], S3 = seq[k:]
    for i in range(1, n - 2):
        p = seq[i - 1]
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                q = seq[k]
                kept = fwd[i - 1] + (total - fwd[k])
                seg = {"A": (i, j), "B": (j, k)}
                for first, second, r1, r2 in _MOVES:
                    lo1, hi1 = seg[first]
                    lo2, hi2 = seg[second]
                    c1 = inner(lo1, hi1, r1)
                    if c1 == INF:
                        continue
                    c2 = inner(lo2, hi2, r2)
                    if c2 == INF:
                        continue
                    h1, t1 = (seq[hi1 - 1], seq[lo1]) if r1 else (seq[lo1], seq[hi1 - 1])
                    h2, t2 = (seq[hi2 - 1], seq[lo2]) if r2 else (seq[lo2], seq[hi2 - 1])
                    cost = kept + d[p][h1] + c1 + d[t1][h2] + c2 + d[t2][q]
                    gain = total - cost
                    if gain > best_gain:
                        a = seq[lo1:hi1][::-1] if r1 else seq[lo1:hi1]
                        b = seq[lo2:hi2][::-1] if r2 else seq[lo2:hi2]
                        best_gain, best_seq = gain, seq[:i] + a + b + seq[k:]
    if best_seq is None:
        return None
    return best_gain, best_seq


def three_opt(seq, d) -> list:
    """Apply best improving 3-opt moves until none is left."""
    seq = list(seq)
    while True:
        move = best_move(seq, d)
        if move is None:
            return seq
        seq = move[1]
