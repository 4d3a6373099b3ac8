"""A concrete model of the universal basis (u_k) behind type II- functionals.

x_k is a piecewise-linear function on [0, 1] with rational breakpoints and
sup-norm 1: first the constant 1, then for j = 1, 2, ... the tents of
height +1 and -1 over [i/2^j, (i+2)/2^j], i = 0, ..., 2^j - 2.

    ||sum a_k u_k||_u = max over subsets F of ||sum_{k in F} a_k x_k||_inf

At a fixed point t the best subset takes every term of one sign, so the
norm is the max over breakpoints of the positive and negative parts.  The
dual norm is a linear program whose columns are those extreme subset
vectors; it is solved exactly by column generation.
"""
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError, ResourceLimitError
from ..vectors import to_fraction

U_NORM_MAX_SUPPORT = 20
U_DUAL_MAX_SUPPORT = 12
MAX_PIVOTS = 10_000


@lru_cache(maxsize=None)
def model_function(k):
    """Breakpoints ((t, value), ...) of x_k, k >= 1."""
    if k < 1:
        raise DomainError("u-basis indices start at 1")
    if k == 1:
        return ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(1)))
    r = k - 2
    j = 1
    while r >= 2 * ((1 << j) - 1):
        r -= 2 * ((1 << j) - 1)
        j += 1
    i, s = divmod(r, 2)
    h = Fraction(1, 1 << j)
    peak = Fraction(-1 if s else 1)
    pts = [(i * h, Fraction(0)), ((i + 1) * h, peak), ((i + 2) * h, Fraction(0))]
    if pts[0][0] > 0:
        pts.insert(0, (Fraction(0), Fraction(0)))
    if pts[-1][0] < 1:
        pts.append((Fraction(1), Fraction(0)))
    return tuple(pts)


def value_at(k, t):
    pts = model_function(k)
    for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
        if t0 <= t <= t1:
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    raise DomainError(f"{t} outside [0, 1]")


class UBasisModel:
    """The enumeration k -> x_k together with the two norms."""

    def function(self, k):
        return model_function(k)

    def value(self, k, t):
        return value_at(k, t)

    def norm(self, coeffs):
        return u_norm(coeffs)

    def dual_norm(self, lambdas):
        return u_dual_norm(lambdas)


def _coeff_dict(coeffs):
    if hasattr(coeffs, "items"):
        pairs = coeffs.items()
    else:
        pairs = enumerate(coeffs, 1)
    out = {}
    for k, v in pairs:
        v = to_fraction(v)
        if v:
            out[int(k)] = v
    return out


def _table(indices):
    """Values of the x_k at every breakpoint of any of them."""
    pts = sorted({t for k in indices for t, _ in model_function(k)})
    return [[value_at(k, t) for k in indices] for t in pts]


def u_norm(coeffs):
    """Exact ||sum a_k u_k||_u for finitely many nonzero a_k."""
    a = _coeff_dict(coeffs)
    if len(a) > U_NORM_MAX_SUPPORT:
        raise ResourceLimitError(
            f"u-norm support {len(a)} > {U_NORM_MAX_SUPPORT}", required=len(a))
    if not a:
        return Fraction(0)
    idx = sorted(a)
    best = Fraction(0)
    for row in _table(idx):
        pos = neg = Fraction(0)
        for k, xv in zip(idx, row):
            term = a[k] * xv
            if term > 0:
                pos += term
            else:
                neg -= term
        best = max(best, pos, neg)
    return best


def u_norming_functional(coeffs):
    """(||sum a_k u_k||_u, lambda) with ||sum lambda_k u_k^*|| <= 1 and
    sum lambda_k a_k equal to the norm.

    lambda is the extreme vector +-sum_{k in F} x_k(t) e_k attaining the
    maximum, which lies in the polar of the u-ball.
    """
    a = _coeff_dict(coeffs)
    if len(a) > U_NORM_MAX_SUPPORT:
        raise ResourceLimitError(
            f"u-norm support {len(a)} > {U_NORM_MAX_SUPPORT}", required=len(a))
    idx = sorted(a)
    best, lam = Fraction(0), {k: Fraction(0) for k in idx}
    for row in _table(idx) if idx else []:
        pos, neg = {}, {}
        sp = sn = Fraction(0)
        for k, xv in zip(idx, row):
            term = a[k] * xv
            if term > 0:
                pos[k] = xv
                sp += term
            elif term < 0:
                neg[k] = -xv
                sn -= term
        if sp > best:
            best, lam = sp, {k: pos.get(k, Fraction(0)) for k in idx}
        if sn > best:
            best, lam = sn, {k: neg.get(k, Fraction(0)) for k in idx}
    return best, lam


def _solve(A, b):
    """Exact solution of the square system A x = b."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise DomainError("singular basis")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _transpose(A):
    return [list(col) for col in zip(*A)]


def u_dual_solve(lambdas):
    """(||sum lambda_q u_q^*||, maximizing a) by exact column generation.

    Primal: min sum mu_v subject to sum mu_v v = lambda, mu >= 0, where v
    ranges over the extreme vectors +-sum_{k in F} x_k(t) e_k of the polar of
    the u-ball.  The simplex multipliers at optimality are an a with
    ||a||_u <= 1 attaining the value.
    """
    lam = _coeff_dict(lambdas)
    if len(lam) > U_DUAL_MAX_SUPPORT:
        raise ResourceLimitError(
            f"dual-norm support {len(lam)} > {U_DUAL_MAX_SUPPORT}", required=len(lam))
    if not lam:
        return Fraction(0), {}
    idx = sorted(lam)
    K = len(idx)
    rhs = [lam[k] for k in idx]
    table = _table(idx)
    # each x_k peaks at +-1, so +-e_k is a column: start from the l1 solution
    cols = []
    for i, v in enumerate(rhs):
        e = [Fraction(0)] * K
        e[i] = Fraction(-1 if v < 0 else 1)
        cols.append(e)
    mu = [abs(v) for v in rhs]
    ones = [Fraction(1)] * K
    for _ in range(MAX_PIVOTS):
        B = _transpose(cols)                  # columns of B are the basis vectors
        y = _solve(_transpose(B), ones)       # B^T y = 1
        best, col = Fraction(1), None
        for row in table:
            pos = [Fraction(0)] * K
            neg = [Fraction(0)] * K
            sp = sn = Fraction(0)
            for i, xv in enumerate(row):
                term = y[i] * xv
                if term > 0:
                    pos[i] = xv
                    sp += term
                elif term < 0:
                    neg[i] = -xv
                    sn -= term
            if sp > best:
                best, col = sp, pos
            if sn > best:
                best, col = sn, neg
        if col is None:
            value = sum(mu, Fraction(0))
            return value, dict(zip(idx, y))
        d = _solve(B, col)
        ratios = [(mu[i] / d[i], i) for i in range(K) if d[i] > 0]
        if not ratios:
            raise DomainError("unbounded dual-norm program")
        theta, leave = min(ratios)
        mu = [m - theta * di for m, di in zip(mu, d)]
        mu[leave] = theta
        cols[leave] = col
    raise ResourceLimitError(f"dual-norm program did not settle in {MAX_PIVOTS} pivots")


def u_dual_norm(lambdas):
    """Exact ||sum lambda_q u_q^*||_u^*."""
    return u_dual_solve(lambdas)[0]
