"""(n, eps) special convex combinations: construction and validation.

A basic (n, eps) s.c.c. is sum_{k in F} c_k e_k with F in S_n, c_k >= 0
summing to 1, and every G subset of F with G in S_{n-1} carrying mass
below eps.  For n = 0 the last clause is vacuous.  A general s.c.c. of
successive blocks x_1 < ... < x_m is one whose projection
sum c_k e_{min supp x_k} is basic.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DomainError, ResourceLimitError, Violation
from .schreier import is_schreier
from .vectors import FinVec, fmt, is_successive, lin_comb, to_fraction

MAX_SCC_SIZE = 1 << 18
MAX_DP_SIZE = 48


@dataclass(frozen=True)
class SccWitness:
    n: int
    epsilon: Fraction
    psi: tuple
    coeffs: tuple
    kind: str = "basic"
    blocks: tuple = field(default=())

    @property
    def vector(self):
        if self.kind == "basic":
            return lin_comb(self.coeffs, [FinVec.unit(k) for k in self.psi])
        return lin_comb(self.coeffs, self.blocks)

    def projection(self):
        return lin_comb(self.coeffs, [FinVec.unit(k) for k in self.psi])

    def sexpr(self):
        coeffs = " ".join(fmt(c) for c in self.coeffs)
        psi = " ".join(str(k) for k in self.psi)
        parts = [f"(scc {self.kind} {self.n} {fmt(self.epsilon)}",
                 f" (psi {psi})", f" (coeffs {coeffs})"]
        if self.kind == "general":
            blocks = " ".join(
                "(vec " + " ".join(f"{k}:{fmt(v)}" for k, v in b.items()) + ")"
                for b in self.blocks)
            parts.append(f" (blocks {blocks})")
        return "".join(parts) + ")"


# -- maximal S_j mass ---------------------------------------------------------

def _scaled(c):
    """Coefficients as integers over a common denominator."""
    D = 1
    for v in c:
        D = D * v.denominator // gcd(D, v.denominator)
    return [int(v * D) for v in c], D


def _mass_level1(F, c):
    """Max sum of c over G in S_1: fix the minimum, add the best #G-1 later.

    Suffix values are kept as a value -> count table, which is small for
    repeated averages.
    """
    ints, D = _scaled(c)
    N = len(F)
    counts = {}
    best, best_p = -1, None
    for p in range(N - 1, -1, -1):
        room = F[p] - 1
        m = ints[p]
        for v in sorted(counts, reverse=True):
            if room <= 0 or v <= 0:
                break
            take = min(room, counts[v])
            m += take * v
            room -= take
        if m > best:
            best, best_p = m, p
        counts[ints[p]] = counts.get(ints[p], 0) + 1
    p = best_p
    rest = sorted(range(p + 1, N), key=lambda i: -ints[i])[: F[p] - 1]
    G = tuple(sorted([F[p]] + [F[i] for i in rest if ints[i] > 0]))
    return Fraction(best, D), G


def _mass_dp(F, c, level):
    """Exact max S_level mass via interval DP (small F only)."""
    ints, D = _scaled(c)
    N = len(F)

    @lru_cache(maxsize=None)
    def H(j, p, q):
        # best (mass, set) of an S_j subset inside positions [p, q)
        if p >= q:
            return 0, ()
        if j == 0:
            i = max(range(p, q), key=lambda t: ints[t])
            return ints[i], (F[i],)
        best = (0, ())
        for s in range(p, q):
            cand = P(j, s, q, min(F[s], q - s))
            if cand[0] > best[0]:
                best = cand
        return best

    @lru_cache(maxsize=None)
    def P(j, s, q, L):
        # <= L consecutive ranges starting at s, each holding an S_{j-1} set
        if s >= q or L <= 0:
            return 0, ()
        if L == 1:
            return H(j - 1, s, q)
        best = (0, ())
        for r in range(s + 1, q + 1):
            m1, g1 = H(j - 1, s, r)
            m2, g2 = P(j, r, q, min(L - 1, q - r))
            if m1 + m2 > best[0]:
                best = (m1 + m2, g1 + g2)
        return best

    m, G = H(level, 0, N)
    return Fraction(m, D), G


def max_mass(F, coeffs, level):
    """Largest coefficient mass of a subset of F lying in S_level.

    Returns (mass, witnessing subset).  Levels >= 2 use an interval DP
    and are limited to MAX_DP_SIZE points.
    """
    F = tuple(F)
    c = tuple(to_fraction(v) for v in coeffs)
    if not F or level < 0:
        return Fraction(0), ()
    if level == 0:
        i = max(range(len(F)), key=lambda t: c[t])
        return c[i], (F[i],)
    if level == 1:
        return _mass_level1(F, c)
    if len(F) > MAX_DP_SIZE:
        raise ResourceLimitError(
            f"S_{level} mass of a {len(F)}-element set exceeds DP limit {MAX_DP_SIZE}",
            required=len(F))
    return _mass_dp(F, c, level)


# -- validation ---------------------------------------------------------------

def validate_scc(w):
    """Empty list iff ``w`` is a valid (n, eps) s.c.c.; else the violations."""
    out = []
    F, c = tuple(w.psi), tuple(w.coeffs)
    if len(F) != len(c):
        out.append(Violation("shape", "psi and coefficients differ in length"))
        return out
    if any(a >= b for a, b in zip(F, F[1:])) or (F and F[0] < 1):
        out.append(Violation("order", f"support not strictly increasing: {F}"))
        return out
    if any(v < 0 for v in c):
        out.append(Violation("negative", "negative coefficient"))
    total = sum(c, Fraction(0))
    if total != 1:
        out.append(Violation("mass", f"mass ≠ 1 (sum is {fmt(total)})"))
    if not is_schreier(F, w.n):
        out.append(Violation("schreier", f"support not in S_{w.n}"))
    if w.n >= 1:
        m, G = max_mass(F, c, w.n - 1)
        if m >= w.epsilon:
            out.append(Violation(
                "small-mass",
                f"S_{w.n - 1} subset {G} has mass {fmt(m)} >= {fmt(w.epsilon)}", G))
    if w.kind == "general":
        blocks = tuple(w.blocks)
        if len(blocks) != len(F):
            out.append(Violation("shape", "blocks and psi differ in length"))
        elif not is_successive(blocks):
            out.append(Violation("order", "blocks are not successive"))
        elif tuple(b.min_supp for b in blocks) != F:
            out.append(Violation("projection", "psi is not the min-supports of the blocks"))
    elif w.kind != "basic":
        out.append(Violation("kind", f"unknown kind {w.kind!r}"))
    return out


# -- construction -------------------------------------------------------------

def _average(elems, pos, n, fan, budget):
    """Level-n repeated average starting at elems[pos].

    The top level averages ``fan`` level-(n-1) blocks (None: as many as the
    block minimum); every inner level averages min-F-many blocks.  Returns
    (F, coeffs, next position) or None when elems or the budget run out.
    """
    if pos >= len(elems) or budget <= 0:
        return None
    if n == 0:
        return [elems[pos]], [Fraction(1)], pos + 1
    if fan is None:
        fan = elems[pos]
    F, c = [], []
    for _ in range(fan):
        sub = _average(elems, pos, n - 1, None, budget - len(F))
        if sub is None:
            return None
        f, cc, pos = sub
        F += f
        c += cc
    if len(F) > budget:
        return None
    return F, [v / fan for v in c], pos


def make_basic_scc(M, n, epsilon, max_size=MAX_SCC_SIZE, max_starts=256):
    """A basic (n, eps) s.c.c. supported on the increasing sequence ``M``.

    Repeated averages: inner levels average min-F-many blocks of the level
    below, and the number T of top-level blocks is raised until every
    S_{n-1} subset carries mass below eps.  T may not exceed min F; when it
    would, the first remaining element of M is skipped.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    if n < 0:
        raise DomainError("level must be nonnegative")
    it = iter(M)
    buf = []
    exhausted = False

    def pull(count):
        nonlocal exhausted
        while len(buf) < count and not exhausted:
            nxt = next(it, None)
            if nxt is None:
                exhausted = True
            else:
                buf.append(int(nxt))

    pull(1)
    if not buf:
        raise ResourceLimitError("empty index source", required=1)
    if n == 0:
        return SccWitness(0, epsilon, (buf[0],), (Fraction(1),))
    if epsilon > 1:
        # every subset carries mass at most 1, so a singleton qualifies
        return SccWitness(n, epsilon, (buf[0],), (Fraction(1),))

    required = 0
    for start in range(max_starts):
        pull(start + 1)
        if start >= len(buf):
            break
        head = buf[start]
        for T in range(1, head + 1):
            need = start + 1
            while True:
                pull(need)
                got = _average(buf[start:need], 0, n, T, max_size)
                if got is not None or exhausted or need - start > max_size:
                    break
                need = start + min(2 * (need - start), max_size + 1)
            if got is None:
                if exhausted:
                    required = max(required, need - start + 1)
                    if n == 1:
                        # uniform averages need more than 1/eps points
                        required = max(required, int(1 / epsilon) + 1)
                    break
                raise ResourceLimitError(
                    f"no basic ({n}, {fmt(epsilon)}) s.c.c. within {max_size} elements",
                    required=max_size + 1)
            F, c, _ = got
            mass, _ = max_mass(F, c, n - 1)
            if mass < epsilon:
                return SccWitness(n, epsilon, tuple(F), tuple(c))
            required = max(required, len(F) + 1)
    raise ResourceLimitError(
        f"no basic ({n}, {fmt(epsilon)}) s.c.c. in the supplied indices",
        required=required)


def make_scc(blocks, n, epsilon, max_size=MAX_SCC_SIZE):
    """An (n, eps) s.c.c. over a sub-list of successive ``blocks``."""
    blocks = list(blocks)
    if not is_successive(blocks):
        raise DomainError("blocks must be successive and nonzero")
    epsilon = to_fraction(epsilon)
    by_min = {b.min_supp: b for b in blocks}
    basic = make_basic_scc([b.min_supp for b in blocks], n, epsilon, max_size=max_size,
                           max_starts=len(blocks))
    chosen = tuple(by_min[k] for k in basic.psi)
    return SccWitness(n, epsilon, basic.psi, basic.coeffs, "general", chosen)
