"""Schreier families S_n: membership, admissibility, enumeration, convolution.

S_0 holds the singletons, S_1 the sets F with #F <= min F, and S_{n+1} the
unions F_1 < ... < F_k of S_n sets with k <= min F_1.  The empty set is a
member of every S_n.

Membership uses the fact that every S_n is hereditary: a sequence split
into consecutive S_{n-1} pieces is covered with the fewest pieces by
always taking the longest admissible prefix, so no backtracking is needed.
Enumeration works on bitmasks over a small ground interval and exists to
give the tests an independent oracle.
"""
from functools import lru_cache
import numpy as np

from .errors import MalformedBlockSequence, ResourceLimitError

LEVEL_CAP = 6
ENUM_MAX_LEVEL = 3
ENUM_MAX_GROUND = 24
CONV_MAX_GROUND = 20


def _as_index_set(F):
    items = sorted(set(int(k) for k in F))
    return tuple(items)


@lru_cache(maxsize=1024)
def _reach(F, n):
    """reach[i] = largest e with F[i:e] in S_n.

    Level n+1 jumps min-many times through the level-n table; the jumps
    are composed by binary lifting.  Position N is absorbing.
    """
    N = len(F)
    reach = np.arange(1, N + 2, dtype=np.int64)
    reach[N] = N
    steps = np.minimum(np.asarray(F, dtype=np.int64), N)
    for _ in range(n):
        pos = np.arange(N, dtype=np.int64)
        jump = reach
        b = 0
        while (steps >> b).any():
            bit = ((steps >> b) & 1).astype(bool)
            pos[bit] = jump[pos[bit]]
            jump = jump[jump]
            b += 1
        nxt = np.append(pos, N)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return tuple(int(v) for v in reach[:N])


def is_schreier(F, n, level_cap=None):
    """Return True iff the finite set ``F`` belongs to S_n."""
    if n < 0:
        return False
    if level_cap is not None and n > level_cap:
        raise ResourceLimitError(f"level {n} exceeds cap {level_cap}", required=n)
    F = _as_index_set(F)
    if not F:
        return True
    if F[0] < 1:
        return False
    return _reach(F, n)[0] == len(F)


def schreier_blocks(F, n):
    """Greedy split of ``F`` into consecutive S_{n-1} blocks (n >= 1).

    Returns the blocks; F is in S_n iff there are at most min F of them.
    """
    F = _as_index_set(F)
    if n < 1:
        raise ValueError("blocks are defined for n >= 1")
    reach = _reach(F, n - 1)
    blocks, p = [], 0
    while p < len(F):
        e = reach[p]
        blocks.append(F[p:e])
        p = e
    return blocks


def is_admissible(minsupps, n):
    """S_n-admissibility of a block sequence given its min-supports."""
    seq = [int(k) for k in minsupps]
    for a, b in zip(seq, seq[1:]):
        if not a < b:
            raise MalformedBlockSequence(f"min-supports not increasing: {seq}")
    if seq and seq[0] < 1:
        raise MalformedBlockSequence(f"min-support below 1: {seq}")
    return is_schreier(seq, n)


# -- bitmask enumeration ---------------------------------------------------

def _ground(ground):
    lo, hi = ground
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad ground interval {ground}")
    return lo, hi


def _popcount(masks):
    c = np.zeros_like(masks)
    m = masks.copy()
    while m.any():
        c += m & 1
        m >>= 1
    return c


def _layers(N):
    masks = np.arange(1 << N, dtype=np.int64)
    pc = _popcount(masks)
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(N + 2))
    return masks, pc, [order[bounds[p]:bounds[p + 1]] for p in range(N + 1)]


def _min_element(masks, lo):
    low = masks & -masks
    out = np.zeros_like(masks)
    nz = low > 0
    out[nz] = np.log2(low[nz]).astype(np.int64) + lo
    return out


def _next_level(inA, layers, minel):
    """Membership table of {unions of <= min F consecutive A-blocks}."""
    size = inA.shape[0]
    big = np.int64(1 << 30)
    cnt = np.full(size, big, dtype=np.int64)
    cnt[0] = 0
    for p, layer in enumerate(layers):
        if p == 0:
            continue
        rem = layer.copy()
        pre = np.zeros_like(layer)
        best = np.full(layer.shape, big, dtype=np.int64)
        for _ in range(p):
            low = rem & -rem
            pre |= low
            rem ^= low
            cand = np.where(inA[pre], cnt[rem] + 1, big)
            np.minimum(best, cand, out=best)
        cnt[layer] = best
    out = cnt <= minel
    out[0] = True
    return out


def _tables(n, ground):
    return _cached_tables(n, *_ground(ground))


@lru_cache(maxsize=8)
def _cached_tables(n, lo, hi):
    return tuple(_iter_tables(n, (lo, hi)))


def _iter_tables(n, ground):
    lo, hi = _ground(ground)
    N = hi - lo + 1
    masks, pc, layers = _layers(N)
    minel = _min_element(masks, lo)
    table = pc <= 1
    yield table
    for _ in range(n):
        table = _next_level(table, layers, minel)
        yield table


def _check_enum(n, ground):
    lo, hi = _ground(ground)
    if n > ENUM_MAX_LEVEL:
        raise ResourceLimitError(f"enumeration level {n} > {ENUM_MAX_LEVEL}", required=n)
    if hi - lo + 1 > ENUM_MAX_GROUND:
        raise ResourceLimitError(
            f"ground size {hi - lo + 1} > {ENUM_MAX_GROUND}", required=hi - lo + 1)
    return lo, hi


def _unmask(mask, lo):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(lo + i)
        mask >>= 1
        i += 1
    return tuple(out)


def enumerate_masks(n, ground):
    """All members of S_n inside ``ground`` as a sorted int array of bitmasks
    (bit i stands for the integer lo + i)."""
    _check_enum(n, ground)
    table = _tables(n, ground)[-1]
    return np.flatnonzero(table)


def enumerate_schreier(n, ground):
    """Exactly the members of S_n contained in the interval ``ground``."""
    lo, _ = _check_enum(n, ground)
    return {_unmask(int(m), lo) for m in enumerate_masks(n, ground)}


_CHUNK = 1 << 16


def _expand(idx_counts):
    """(row index, position within group) pairs for a ragged repeat."""
    counts = idx_counts
    rows = np.repeat(np.arange(counts.size), counts)
    first = np.cumsum(counts) - counts
    pos = np.arange(rows.size) - first[rows]
    return rows, pos


def convolve_masks(B, A, ground):
    """S_B * S_A on ``ground`` built straight from the definition.

    ``B`` and ``A`` are iterables of bitmasks.  A set lies in the product
    when it is a union of successive A-sets whose minima form a B-set.
    Returns a boolean table indexed by bitmask.

    Partial decompositions are grown one block at a time as flat arrays of
    (minima so far, last minimum, union of finished blocks).
    """
    lo, hi = _ground(ground)
    N = hi - lo + 1
    size = 1 << N
    A = np.array(sorted(int(a) for a in A if int(a)), dtype=np.int64)
    a_min = _min_element(A, 0)
    a_top = np.array([int(a).bit_length() - 1 for a in A], dtype=np.int64)
    order = np.argsort(a_min, kind="stable")
    A, a_min, a_top = A[order], a_min[order], a_top[order]
    a_count = np.bincount(a_min, minlength=N)
    a_start = np.cumsum(a_count) - a_count

    member = np.zeros(size, dtype=bool)
    member[np.asarray([int(b) for b in B], dtype=np.int64)] = True
    prefix = np.zeros(size, dtype=bool)
    rem = np.flatnonzero(member).astype(np.int64)
    pre = np.zeros_like(rem)
    while rem.size:
        low = rem & -rem
        pre |= low
        rem ^= low
        prefix[pre] = True
        live = rem != 0
        rem, pre = rem[live], pre[live]

    out = np.zeros(size, dtype=bool)
    out[0] = member[0]
    singles = np.array([1 << m for m in range(N)], dtype=np.int64)
    keep = prefix[singles]
    M = singles[keep]
    last = np.arange(N, dtype=np.int64)[keep]
    U = np.zeros(M.size, dtype=np.int64)
    frontier = [(M, last, U)]
    while frontier:
        M, last, U = frontier.pop()
        if M.size > _CHUNK:
            for i in range(0, M.size, _CHUNK):
                frontier.append((M[i:i + _CHUNK], last[i:i + _CHUNK], U[i:i + _CHUNK]))
            continue
        rows, pos = _expand(a_count[last])
        ai = a_start[last[rows]] + pos
        blockU = U[rows] | A[ai]
        done = member[M[rows]]
        out[blockU[done]] = True
        # choose the next minimum strictly above the chosen block
        gap = N - 1 - a_top[ai]
        r2, p2 = _expand(gap)
        nxt = a_top[ai][r2] + 1 + p2
        M2 = M[rows][r2] | (np.int64(1) << nxt)
        ok = prefix[M2]
        if ok.any():
            frontier.append((M2[ok], nxt[ok], blockU[r2][ok]))
    return out


def convolution_equals(n, m, ground):
    """True iff S_n * S_m equals S_{n+m} on ``ground``."""
    lo, hi = _ground(ground)
    if n + m > ENUM_MAX_LEVEL:
        raise ResourceLimitError(f"n+m = {n + m} > {ENUM_MAX_LEVEL}", required=n + m)
    if hi - lo + 1 > CONV_MAX_GROUND:
        raise ResourceLimitError(
            f"ground size {hi - lo + 1} > {CONV_MAX_GROUND}", required=hi - lo + 1)
    tables = _tables(n + m, ground)
    Sn = np.flatnonzero(tables[n])
    Sm = np.flatnonzero(tables[m])
    lhs = convolve_masks(Sn, Sm, ground)
    return bool(np.array_equal(lhs, tables[n + m]))
