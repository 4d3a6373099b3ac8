"""Reproducible random members of W near a vector, and finite index probes.

Every draw uses its own generator keyed by (seed, instance, counter), so a
sample does not depend on how many came before it or on scheduling.  Each
candidate is validated before it is emitted.

Special sequences are coded as they are built, in the order a validator
meets them, so re-validating a sample against the same base table (that of
the dependent-sequence hint, or an empty one) assigns the same sigma values.
"""
import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError, ResourceLimitError
from ..normingset.coding import CodingTable, sigma
from ..normingset.functionals import (AlphaAvg, BetaAvg, SpecialSequence, TypeIAlpha,
                                      TypeIBeta, TypeIIMinus, TypeIIPlus, Unit, evaluate,
                                      negate, restrict)
from ..normingset.ubasis import U_DUAL_MAX_SUPPORT, u_dual_norm
from ..normingset.validate import validate_functional
from ..schreier import is_schreier
from .bounds import Budget, _greedy_groups

CLAUSES = ("0", "I-alpha", "I-beta", "II+", "II-")
MAX_ATTEMPTS = 8


def instance_rng(seed, instance, counter=0):
    """Counter-based generator: the stream is a pure function of its key."""
    key = f"{seed}|{instance}|{counter}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:16], "big"))


def base_table(hints):
    dep = (hints or {}).get("dep")
    return dep.table if dep is not None and dep.table is not None else None


class _Draw:
    """One sample under construction: generator, profile, scratch coding table."""

    def __init__(self, rng, x, profile, hints, base):
        self.rng = rng
        self.x = x
        self.profile = profile
        self.hints = hints
        self.table = base.fork() if base is not None else CodingTable(profile)
        self.sign = dict(x.items())

    # -- coordinates ------------------------------------------------------

    def points(self, lo, hi, dense=False):
        """Increasing indices in [lo, hi]: the support of x there, or all of them."""
        supp = [k for k in self.sign if lo <= k <= hi]
        if dense or not supp or self.rng.random() < 0.3:
            return list(range(lo, hi + 1))
        return supp

    def unit(self, k):
        v = self.sign.get(k)
        if v is None or self.rng.random() < 0.15:
            return Unit(self.rng.choice((1, -1)), k)
        return Unit(1 if v > 0 else -1, k)

    # -- clause 2 ---------------------------------------------------------

    def sizes(self, prev, prev_max):
        if prev is None:
            return self.rng.randint(1, 3)
        s = prev + self.rng.randint(1, 3)
        if self.profile.vfg_exponential:
            s = max(s, (1 << prev_max) + self.rng.randint(1, 3))
        return s

    def alpha_functional(self, pts, j, depth=1):
        """Type I-alpha of weight j over successive chunks of pts."""
        avgs, mins, pos, size, prev_max = [], [], 0, None, 0
        want = self.rng.randint(1, 4)
        while pos < len(pts) and len(avgs) < want:
            s = self.sizes(size, prev_max)
            if not is_schreier(mins + [pts[pos]], j):
                break
            take = self.rng.randint(1, max(1, min(s, len(pts) - pos, 6)))
            chunk = pts[pos:pos + take]
            summands = []
            if depth > 1 and take >= 2 and self.rng.random() < 0.25:
                inner = self.alpha_functional(chunk, self.rng.randint(1, 2), depth - 1)
                summands = [inner] if inner is not None else []
            if not summands:
                summands = [self.unit(k) for k in chunk]
            avgs.append(AlphaAvg(s, summands))
            mins.append(chunk[0])
            size, prev_max = s, chunk[-1]
            pos += take + (self.rng.randint(0, 1) if self.rng.random() < 0.3 else 0)
        return TypeIAlpha(j, avgs) if avgs else None

    # -- special sequences --------------------------------------------------

    def l1_weight(self):
        choices = []
        for w in self.profile.elements(1):
            choices.append(w)
            if len(choices) == 3:
                break
        n = self.hints.get("weight")
        if n is not None and self.profile.in_L(n, 1):
            choices.append(n)
        return self.rng.choice(choices)

    def sequence(self, pts, d):
        """A special sequence of up to d pairs over successive pieces of pts."""
        d = max(1, min(d, len(pts) // 2))
        if d < 1 or len(pts) < 2:
            return None
        cuts = sorted(self.rng.sample(range(1, len(pts)), 2 * d - 1))
        pieces = [pts[a:b] for a, b in zip([0] + cuts, cuts + [len(pts)])]
        pairs, vecs = [], []
        w = self.l1_weight()
        for q in range(d):
            if q:
                try:
                    w = sigma(vecs, self.table)
                except ResourceLimitError:
                    break
            f = self.alpha_functional(pieces[2 * q], w)
            g = self.alpha_functional(pieces[2 * q + 1], w)
            if f is None or g is None or not f.vec or not g.vec:
                break
            pairs.append((f, g))
            vecs += [f.vec, g.vec]
        return SpecialSequence(pairs) if pairs else None

    def selection(self, seq, allowed):
        """A random F inside ``allowed`` obeying the cardinality rule."""
        allowed = list(allowed)
        if not allowed:
            return None
        size = self.rng.randint(1, len(allowed))
        F = sorted(self.rng.sample(allowed, size))
        k = self.profile.card_factor
        while F and k * len(F) > seq.pairs[F[0] - 1][0].vec.min_supp:
            F = F[:-1] if len(F) > 1 and self.rng.random() < 0.5 else F[1:]
        return tuple(F) or None

    def lambdas(self, F):
        lam = [Fraction(self.rng.randint(-4, 4) or 1, self.rng.randint(1, 4)) for _ in F]
        dn = u_dual_norm(dict(zip(F, lam)))
        scale = Fraction(self.rng.randint(1, 4), 4) / dn
        return [v * scale for v in lam]

    def type_II(self, kind, seq, allowed):
        F = self.selection(seq, allowed)
        if F is None:
            return None
        if kind == "II+":
            return TypeIIPlus(seq, F)
        F = F[:U_DUAL_MAX_SUPPORT]
        return TypeIIMinus(seq, F, self.lambdas(F))

    def dep_or_new(self, pts):
        dep = self.hints.get("dep")
        if dep is not None and self.rng.random() < 0.7:
            return dep.seq
        return self.sequence(pts, self.rng.randint(1, 3))

    # -- clause 3 ---------------------------------------------------------

    def beta_functional(self, pts, j):
        seq = self.dep_or_new(pts)
        if seq is None or len(seq) < 1:
            return None
        d = len(seq)
        order = list(range(1, d + 1))
        avgs, mins, size, prev_max, pos = [], [], None, 0, 0
        while pos < d:
            take = self.rng.randint(1, d - pos)
            block = order[pos:pos + take]
            pos += take
            parts = [block] if len(block) < 2 or self.rng.random() < 0.5 else \
                [block[: len(block) // 2], block[len(block) // 2:]]
            summands = []
            for part in parts:
                h = self.type_II(self.rng.choice(("II+", "II-")), seq, part)
                if h is not None:
                    summands.append(h)
            if not summands:
                continue
            head = min(h.vec.min_supp for h in summands if h.vec) if any(
                h.vec for h in summands) else None
            if head is None or not is_schreier(mins + [head], j):
                break
            s = max(self.sizes(size, prev_max), len(summands))
            avgs.append(BetaAvg(s, summands))
            mins.append(head)
            size = s
            prev_max = max(h.vec.max_supp for h in summands if h.vec)
        return TypeIBeta(j, avgs) if avgs else None

    # -- assembly -----------------------------------------------------------

    def weight(self):
        ws = list(self.hints.get("weights", ()))
        if ws and self.rng.random() < 0.5:
            return self.rng.choice(ws)
        return self.rng.randint(1, 4)

    def draw(self, clause):
        lo, hi = self.x.range
        span = hi - lo
        a = lo + (self.rng.randint(0, span // 3) if span and self.rng.random() < 0.4 else 0)
        b = hi - (self.rng.randint(0, span // 3) if span and self.rng.random() < 0.4 else 0)
        if clause == "0":
            return self.unit(self.rng.choice(self.points(a, b)))
        if clause == "I-alpha":
            return self.alpha_functional(self.points(a, b), self.weight(), depth=2)
        if clause == "I-beta":
            return self.beta_functional(self.points(a, b + 2 + 2 * self.rng.randint(0, 3),
                                                    dense=True), self.weight())
        pts = self.points(a, b + 2 + 2 * self.rng.randint(0, 3), dense=True)
        seq = self.dep_or_new(pts)
        if seq is None:
            return None
        return self.type_II(clause, seq, range(1, len(seq) + 1))

    def finish(self, f):
        if self.rng.random() < 0.2 and f.kind != "0":
            lo, hi = f.vec.range
            a = self.rng.randint(lo, hi)
            f = restrict(f, (a, self.rng.randint(a, hi)))
        if self.rng.random() < 0.3:
            f = negate(f)
        return f


def _clause_weights(hints):
    if hints.get("dep") is not None:
        return (1, 2, 2, 3, 3)
    return (1, 3, 2, 2, 2)


def sample_functionals(x, count, seed, profile, hints=None, instance=0, clauses=None):
    """Yield ``count`` validated functionals of W whose supports meet ran x."""
    hints = dict(hints or {})
    if count <= 0 or not x:
        return
    base = base_table(hints)
    weights = _clause_weights(hints)
    pool = tuple(clauses) if clauses else CLAUSES
    if clauses:
        weights = tuple(w for c, w in zip(CLAUSES, weights) if c in pool)
    lo, hi = x.range
    emitted = 0
    counter = 0
    while emitted < count:
        for _ in range(MAX_ATTEMPTS):
            rng = instance_rng(seed, instance, counter)
            counter += 1
            d = _Draw(rng, x, profile, hints, base)
            clause = rng.choices(pool, weights)[0]
            try:
                f = d.draw(clause)
                if f is None or not f.vec:
                    continue
                f = d.finish(f)
            except (DomainError, ResourceLimitError):
                continue
            v = f.vec
            if not v or not any(lo <= k <= hi for k in v.support):
                continue
            if validate_functional(f, profile, base):
                continue
            break
        else:
            # fall back to a unit on the support; it always lies in W
            k = sorted(x.support)[counter % len(x)]
            f = Unit(1 if x[k] > 0 else -1, k)
        emitted += 1
        yield f


# -- index probes ---------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    value: Fraction
    vector: int = 0          # 1-based index of the maximizing x_k
    averages: tuple = ()


def _alpha_families(x, j, budget, profile, min_size):
    """Greedy sign-aligned alpha-average families for one vector."""
    atoms = [(k, k, Unit(1 if v > 0 else -1, k), abs(v)) for k, v in x.items()]
    out = []
    for off in range(min(budget.offsets, len(atoms))):
        groups, sizes = _greedy_groups(atoms, j, off, profile, budget)
        if groups and min_size > 1:
            sizes = [max(s, min_size + q) for q, s in enumerate(sizes)]
        if groups:
            out.append(tuple(AlphaAvg(s, [a[2] for a in g]) for g, s in zip(groups, sizes)))
    return out


def _families_ok(avgs, j, profile):
    vecs = [a.vec for a in avgs]
    if any(not v for v in vecs):
        return False
    if not is_schreier([v.min_supp for v in vecs], j):
        return False
    return all(profile.vfg_ok(avgs[q].size, avgs[q - 1].size, vecs[q - 1].max_supp)
               for q in range(1, len(avgs)))


def alpha_probe(xs, j, budget=None, profile=None, min_size=1, seed=0, detail=False):
    """Largest sum_q |alpha_q(x_k)| found over very fast growing, S_j-admissible
    alpha-average families with s(alpha_1) >= min_size.  A finite estimate."""
    if profile is None:
        from ..normingset.profile import make_profile
        profile = make_profile("desk")
    budget = Budget.of(budget)
    best = ProbeResult(Fraction(0))
    for k, x in enumerate(xs, 1):
        if not x:
            continue
        fams = _alpha_families(x, j, budget, profile, min_size)
        for c in range(budget.candidates or 16):
            rng = instance_rng(seed, f"alpha:{k}", c)
            d = _Draw(rng, x, profile, {}, None)
            f = d.alpha_functional(d.points(*x.range), j)
            if f is not None:
                fams.append(f.averages)
        for avgs in fams:
            if avgs[0].size < min_size or not _families_ok(avgs, j, profile):
                continue
            v = sum((abs(evaluate(a, x)) for a in avgs), Fraction(0))
            if v > best.value:
                best = ProbeResult(v, k, tuple(avgs))
    return best if detail else best.value


def beta_probe(xs, j, budget=None, profile=None, min_size=1, seed=0, hints=None,
               detail=False):
    """Largest sum_q |beta_q(x_k)| over sampled type I-beta functionals of
    weight j (their averages form the families).  A finite estimate."""
    if profile is None:
        from ..normingset.profile import make_profile
        profile = make_profile("desk")
    budget = Budget.of(budget)
    hints = dict(hints or {})
    base = base_table(hints)
    best = ProbeResult(Fraction(0))
    for k, x in enumerate(xs, 1):
        if not x:
            continue
        for c in range(budget.candidates or 16):
            rng = instance_rng(seed, f"beta:{k}", c)
            d = _Draw(rng, x, profile, hints, base)
            lo, hi = x.range
            try:
                f = d.beta_functional(d.points(lo, hi + 6, dense=True), j)
            except (DomainError, ResourceLimitError):
                continue
            if f is None or f.averages[0].size < min_size:
                continue
            if validate_functional(f, profile, base):
                continue
            v = sum((abs(evaluate(a, x)) for a in f.averages), Fraction(0))
            if v > best.value:
                best = ProbeResult(v, k, tuple(f.averages))
    return best if detail else best.value


def branch_probe(dep, xs):
    """Rows k, columns q: (|(f_q + g_q)(x_k)|, |(f_q - g_q)(x_k)|)."""
    seq = dep.seq if hasattr(dep, "seq") else dep
    plus = [seq.plus(q) for q in range(1, len(seq) + 1)]
    minus = [seq.minus(q) for q in range(1, len(seq) + 1)]
    return [[(abs(p.dot(x)), abs(m.dot(x))) for p, m in zip(plus, minus)] for x in xs]
