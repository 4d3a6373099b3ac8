"""Independent brute-force oracles used to freeze expected values.

None of these share code with the library beyond FinVec and Fraction.
"""
from fractions import Fraction
from math import gcd
from itertools import combinations


# -- Schreier families ------------------------------------------------------

def _s1(F):
    return len(F) <= min(F)


def schreier_brute(F, n):
    """F in S_n by trying every split into consecutive pieces."""
    F = tuple(sorted(F))
    if not F:
        return True
    if F[0] < 1:
        return False
    if n == 0:
        return len(F) == 1
    if n == 1:
        return _s1(F)

    def split(rest, limit):
        # rest is a union of <= limit successive S_{n-1} sets
        if not rest:
            return True
        if limit == 0:
            return False
        return any(schreier_brute(rest[:c], n - 1) and split(rest[c:], limit - 1)
                   for c in range(1, len(rest) + 1))
    return split(F, F[0])


def schreier_members(n, lo, hi):
    ground = range(lo, hi + 1)
    out = set()
    for r in range(len(ground) + 1):
        for F in combinations(ground, r):
            if schreier_brute(F, n):
                out.add(frozenset(F))
    return out


# -- Tsirelson norm via the norming set -------------------------------------

def tsirelson_norming_set(N, scale_bits=12):
    """Nonnegative members of the Tsirelson norming set on {1..N}, scaled by
    2^scale_bits to integer tuples; built by closing
    K <- K u {(1/2)(f_1 + ... + f_d): f_1 < ... < f_d in K, d <= min supp f_1}.
    x is taken nonnegative, so signs are not needed."""
    one = 1 << scale_bits
    K = set()
    for k in range(1, N + 1):
        v = [0] * N
        v[k - 1] = one
        K.add(tuple(v))

    def supp(f):
        s = [i + 1 for i, a in enumerate(f) if a]
        return s[0], s[-1]

    while True:
        items = sorted(K, key=supp)
        new = set(K)
        spans = {f: supp(f) for f in items}

        def extend(acc, last_max, count, limit):
            if count >= 2:
                new.add(tuple(a // 2 for a in acc))
            if count == limit:
                return
            for g in items:
                lo, hi = spans[g]
                if lo > last_max:
                    extend([a + b for a, b in zip(acc, g)], hi, count + 1, limit)

        for f in items:
            lo, hi = spans[f]
            if lo >= 2:
                extend(list(f), hi, 1, lo)
        if new == K:
            return K
        K = new


def naive_tsirelson(x, K, scale_bits=12):
    """max over the norming set of <f, |x|>, in exact integer arithmetic."""
    import numpy as np
    if not isinstance(K, np.ndarray):
        K = np.array(sorted(K), dtype=np.int64)
    N = K.shape[1]
    vals = [abs(x[k]) for k in range(1, N + 1)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = np.array([int(v * den) for v in vals], dtype=np.int64)
    return Fraction(int((K @ ints).max()), den << scale_bits)


# -- subset excess -----------------------------------------------------------

def subset_excess_brute(x, lam, tnorm):
    items = list(x.items())
    best = Fraction(0)
    from hinorm.vectors import FinVec
    for r in range(1, len(items) + 1):
        for G in combinations(items, r):
            v = tnorm(FinVec(dict(G))) - lam * sum(abs(a) for _, a in G)
            best = max(best, v)
    return best


# -- universal-basis model ---------------------------------------------------

def model_value(k, t):
    """x_k(t) computed straight from the description (constant, then tents)."""
    if k == 1:
        return Fraction(1)
    r = k - 2
    j = 1
    while r >= 2 * (2 ** j - 1):
        r -= 2 * (2 ** j - 1)
        j += 1
    i, s = divmod(r, 2)
    h = Fraction(1, 2 ** j)
    a, m, b = i * h, (i + 1) * h, (i + 2) * h
    height = -1 if s else 1
    if t <= a or t >= b:
        return Fraction(0)
    return height * (t - a) / h if t <= m else height * (b - t) / h


def _level(k):
    r, j = k - 2, 1
    while r >= 2 * (2 ** j - 1):
        r -= 2 * (2 ** j - 1)
        j += 1
    return j


def u_norm_grid(coeffs):
    """max over subsets F and dyadic grid points t of |sum_{k in F} a_k x_k(t)|."""
    ks = sorted(coeffs)
    J = max([_level(k) for k in ks if k > 1] + [1])
    grid = [Fraction(i, 2 ** J) for i in range(2 ** J + 1)]
    best = Fraction(0)
    for r in range(1, len(ks) + 1):
        for F in combinations(ks, r):
            for t in grid:
                best = max(best, abs(sum(coeffs[k] * model_value(k, t) for k in F)))
    return best


def u_dual_vertices(lam):
    """Dual norm for two coordinates by enumerating vertices of the unit ball."""
    (k1, l1), (k2, l2) = sorted(lam.items())
    J = max([_level(k) for k in (k1, k2) if k > 1] + [1])
    grid = [Fraction(i, 2 ** J) for i in range(2 ** J + 1)]
    rows = set()
    for t in grid:
        for F in ((k1,), (k2,), (k1, k2)):
            r = (model_value(k1, t) if k1 in F else Fraction(0),
                 model_value(k2, t) if k2 in F else Fraction(0))
            if r != (0, 0):
                rows.add(r)
                rows.add((-r[0], -r[1]))
    rows = list(rows)
    best = Fraction(0)
    for (a1, b1), (a2, b2) in combinations(rows, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        p = ((b2 - b1) / det, (a1 - a2) / det)
        if all(a * p[0] + b * p[1] <= 1 for a, b in rows):
            best = max(best, l1 * p[0] + l2 * p[1])
    return best


# -- separation --------------------------------------------------------------

def separates_brute(f, x1, x2, x3):
    """The first pair (f_q, g_q) of f whose range meets ran x2 misses ran x3."""
    def meets(v, x):
        return bool(v) and v.min_supp <= x.max_supp and x.min_supp <= v.max_supp
    for q in f.F:
        v = f.seq.plus(q)
        if meets(v, x2):
            return not meets(v, x3)
    return False
