"""Exact Tsirelson norm (constant 1/2, S_1-admissible intervals).

The norm is the solution of

    ||x||_T = max(||x||_inf, sup (1/2) sum_i ||E_i x||_T)

over E_1 < ... < E_d with d <= min E_1.  For a finitely supported x every
useful family has at least two intervals, each strictly smaller than x, so
the implicit equation unrolls into a recursion over contiguous runs of the
support.  Only |x| matters.
"""
from fractions import Fraction
from functools import lru_cache

from .errors import ResourceLimitError
from .vectors import FinVec, lin_comb

EXACT_THRESHOLD = 16


@lru_cache(maxsize=1 << 18)
def _norm(run):
    """T-norm of a run given as a tuple of (index, |coefficient|)."""
    N = len(run)
    if N == 0:
        return Fraction(0)
    top = max(a for _, a in run)
    if N == 1:
        return top

    pack = {}

    def packed(i, k):
        # best sum of norms of <= k disjoint ordered runs inside run[i:]
        if k <= 0 or i >= N:
            return Fraction(0)
        k = min(k, N - i)
        key = (i, k)
        if key in pack:
            return pack[key]
        best = packed(i + 1, k)
        for c in range(i + 1, N + 1):
            v = _norm(run[i:c]) + packed(c, k - 1)
            if v > best:
                best = v
        pack[key] = best
        return best

    best = Fraction(0)
    for p in range(N):
        allowed = run[p][0]
        if allowed < 2:
            continue
        for c in range(p + 1, N + 1):
            if p == 0 and c == N:
                continue
            v = _norm(run[p:c]) + packed(c, allowed - 1)
            if v > best:
                best = v
    return max(top, best / 2)


def tsirelson_norm(x, threshold=EXACT_THRESHOLD):
    """Exact ||x||_T for a FinVec with at most ``threshold`` support points."""
    if len(x) > threshold:
        raise ResourceLimitError(
            f"support {len(x)} exceeds exact-mode threshold {threshold}", required=len(x))
    return _norm(tuple((k, abs(v)) for k, v in x.items()))


def tsirelson_dominator(blocks, coeffs, threshold=EXACT_THRESHOLD):
    """6 ||sum c_k e_{max supp x_k}||_T.

    An upper bound for ||sum c_k x_k|| in the space whenever the x_k are
    successive with norm at most 1; certifying that is the caller's job.
    """
    if len(blocks) != len(coeffs):
        raise ValueError("blocks and coefficients differ in length")
    proj = lin_comb(coeffs, [FinVec.unit(b.max_supp) for b in blocks])
    return 6 * tsirelson_norm(proj, threshold)


def tsirelson_upper(x, threshold=EXACT_THRESHOLD):
    """Certified upper bound for ||x||_T: exact when small, else l1."""
    if len(x) <= threshold:
        return tsirelson_norm(x, threshold)
    return x.l1_norm()


def max_subset_excess(x, lam):
    """max over G of ||x_G||_T - lam * sum_{k in G} |x_k|, with a maximizer G.

    x_G is the restriction of x to G, a subset of its support.  Splitting
    ||x_G||_T = (1/2) sum ||E_i x_G||_T turns the excess of a run at lam
    into half the excesses of the pieces at 2 lam, and any piece with
    lam >= 1 contributes nothing (the T-norm is below the l1 norm).  So the
    recursion depth is log2(1/lam) and every G is covered exactly.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    items = [(k, abs(v)) for k, v in x.items()]
    idx = [k for k, _ in items]
    a = [v for _, v in items]
    memo = {}

    def argmax(i, j):
        best = i
        for p in range(i + 1, j):
            if a[p] > a[best]:
                best = p
        return best

    def D(i, j, lam):
        if lam >= 1 or i >= j:
            return Fraction(0), ()
        key = (i, j, lam)
        if key in memo:
            return memo[key]
        top = argmax(i, j)
        best = (a[top] * (1 - lam), (idx[top],))
        if lam < Fraction(1, 2) and j - i >= 2:
            split = _best_split(i, j, 2 * lam)
            if split[0] / 2 > best[0]:
                best = (split[0] / 2, split[1])
        memo[key] = best
        return best

    def _best_split(i, j, lam2):
        # max of sum_i D(E_i, lam2) over E_1 < ... < E_d inside [i, j), d <= min E_1
        pack = {}
        points_only = lam2 >= Fraction(1, 2)

        def packed(c, r):
            if r <= 0 or c >= j:
                return Fraction(0), ()
            r = min(r, j - c)
            if (c, r) in pack:
                return pack[(c, r)]
            if points_only:
                # pieces at lam2 >= 1/2 are worth their max entry, so single points suffice
                top = sorted(range(c, j), key=lambda p: a[p], reverse=True)[:r]
                out = (sum((a[p] for p in top), Fraction(0)) * (1 - lam2),
                       tuple(idx[p] for p in sorted(top)))
            else:
                out = packed(c + 1, r)
                for e in range(c + 1, j + 1):
                    v, g = D(c, e, lam2)
                    if v <= 0:
                        continue
                    w, h = packed(e, r - 1)
                    if v + w > out[0]:
                        out = (v + w, g + h)
            pack[(c, r)] = out
            return out

        best = (Fraction(0), ())
        for p in range(i, j):
            allowed = idx[p]
            for e in range(p + 1, j + 1):
                v, g = D(p, e, lam2)
                w, h = packed(e, allowed - 1)
                if v + w > best[0]:
                    best = (v + w, g + h)
                if points_only:
                    break       # the single point p suffices; later starts are tried on their own
        return best

    value, G = D(0, len(a), lam)
    return (value, G) if value > 0 else (Fraction(0), ())
