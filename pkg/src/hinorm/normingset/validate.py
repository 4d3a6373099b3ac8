"""Clause-by-clause validation of functionals against the norming set W.

Violations are data: each carries a short code, a message and the path of
the offending node inside the tree.

    shape          malformed node (bad window, empty or out-of-range selection)
    avg-count      an average has more summands than its size
    avg-order      alpha-average summands are not successive
    avg-kind       type I node over the wrong kind of average
    beta-kind      beta-average summand is not of type II
    beta-disjoint  beta-average summands share a weight
    order          type I averages are not successive
    admissibility  average min-supports not in S_n
    size-chain     averages are not very fast growing
    pair-kind      special sequence pair is not of type I-alpha
    interlacing    f_1 < g_1 < f_2 < ... fails
    pair-weight    w(f_q) != w(g_q)
    l1-weight      w(f_1) not in L1
    sigma          w(f_q) differs from the coding of the prefix
    cardinality    2#F exceeds min supp f_{min F}
    lambda-norm    ||sum lambda_q u_q^*|| > 1
    convex         convex weights negative or not summing to 1
"""
from fractions import Fraction

from ..errors import DomainError, ResourceLimitError, Violation
from ..schreier import is_schreier
from ..vectors import fmt
from .coding import CodingTable, sigma
from .functionals import (AlphaAvg, BetaAvg, ConvexComb, SpecialSequence, TypeIAlpha,
                          TypeIIMinus, Unit, Zero, _Average, _TypeI, _TypeII, weight_set)
from .ubasis import u_dual_norm


def _v(code, message, path):
    return Violation(code, f"{message} at {path or 'root'}", (path,))


class _Checker:
    def __init__(self, profile, table):
        self.profile = profile
        self.table = table
        self.out = []
        self.seen = set()
        self.seen_seq = set()

    def add(self, code, message, path):
        self.out.append(_v(code, message, path))

    def node(self, f, path):
        if id(f) in self.seen:
            return
        self.seen.add(id(f))
        if isinstance(f, (Zero, Unit)):
            return
        if isinstance(f, _Average):
            self.average(f, path)
        elif isinstance(f, _TypeI):
            self.type_I(f, path)
        elif isinstance(f, _TypeII):
            self.type_II(f, path)
        elif isinstance(f, ConvexComb):
            self.convex(f, path)
        elif isinstance(f, SpecialSequence):
            self.sequence(f, path)
        else:
            self.add("shape", f"unknown node {type(f).__name__}", path)

    def window(self, f, path):
        lo, hi = f.window
        if lo is not None and hi is not None and lo > hi:
            self.add("shape", f"empty window [{lo}, {hi}]", path)

    def average(self, f, path):
        subs = f.summands
        if len(subs) > f.size:
            self.add("avg-count", f"{len(subs)} summands exceed size {f.size}", path)
        if isinstance(f, AlphaAvg):
            prev = 0
            for g in subs:
                v = g.vec
                if v and v.min_supp <= prev:
                    self.add("avg-order", "alpha-average summands are not successive", path)
                    break
                if v:
                    prev = v.max_supp
        else:
            weights = []
            for j, g in enumerate(subs):
                if not g.is_type_II:
                    self.add("beta-kind", f"summand {j + 1} is {g.kind}, not type II", path)
                else:
                    weights.append(weight_set(g))
            for a in range(len(weights)):
                for b in range(a + 1, len(weights)):
                    common = weights[a] & weights[b]
                    if common:
                        self.add("beta-disjoint",
                                 f"summands share weights {sorted(common)}", path)
        for j, g in enumerate(subs):
            self.node(g, f"{path}/{f.kind}[{j + 1}]")

    def type_I(self, f, path):
        self.window(f, path)
        n = f.weight
        if n < 1:
            self.add("shape", f"weight {n} < 1", path)
        want = AlphaAvg if isinstance(f, TypeIAlpha) else BetaAvg
        avgs = f.averages
        for j, a in enumerate(avgs):
            if not isinstance(a, want):
                self.add("avg-kind", f"average {j + 1} is {a.kind}, expected {want.kind}", path)
        vecs = [a.vec for a in avgs]
        if any(not v for v in vecs):
            self.add("order", "an average is zero", path)
        else:
            if any(u.max_supp >= v.min_supp for u, v in zip(vecs, vecs[1:])):
                self.add("order", "averages are not successive", path)
            mins = [v.min_supp for v in vecs]
            if mins == sorted(set(mins)) and not is_schreier(mins, n):
                self.add("admissibility", f"min-supports {tuple(mins)} not in S_{n}", path)
            for j in range(1, len(avgs)):
                s, s0 = avgs[j].size, avgs[j - 1].size
                m = vecs[j - 1].max_supp
                if not self.profile.vfg_ok(s, s0, m):
                    if self.profile.vfg_exponential and s <= (1 << m):
                        msg = f"very fast growing: {s} ≤ 2^{m}"
                    else:
                        msg = f"very fast growing: size {s} ≤ previous size {s0}"
                    self.add("size-chain", msg, path)
        for j, a in enumerate(avgs):
            self.node(a, f"{path}/{f.kind}[{j + 1}]")

    def sequence(self, seq, path):
        if id(seq) in self.seen_seq:
            return
        self.seen_seq.add(id(seq))
        pairs = seq.pairs
        if not pairs:
            self.add("shape", "empty special sequence", path)
            return
        flat = []
        for q, (f, g) in enumerate(pairs, 1):
            for name, h in (("f", f), ("g", g)):
                if not isinstance(h, TypeIAlpha):
                    self.add("pair-kind", f"{name}_{q} is {h.kind}, not type I-alpha", path)
            flat += [f, g]
        vecs = [h.vec for h in flat]
        if any(not v for v in vecs) or any(
                u.max_supp >= v.min_supp for u, v in zip(vecs, vecs[1:])):
            self.add("interlacing", "clause (1): f_1 < g_1 < f_2 < ... fails", path)
        typed = all(isinstance(h, TypeIAlpha) for h in flat)
        if typed:
            for q, (f, g) in enumerate(pairs, 1):
                if f.weight != g.weight:
                    self.add("pair-weight",
                             f"clause (2): w(f_{q}) = {f.weight} ≠ w(g_{q}) = {g.weight}", path)
            w1 = pairs[0][0].weight
            if not self.profile.in_L(w1, 1):
                self.add("l1-weight", f"clause (3): w(f_1) = {w1} ∉ L_1", path)
            if all(vecs):
                for q in range(2, len(pairs) + 1):
                    prefix = seq.prefix_vectors(q)
                    try:
                        want = sigma(prefix, self.table)
                    except ResourceLimitError as exc:
                        self.add("sigma", f"clause (3): sigma of prefix {q - 1} "
                                 f"not computable ({exc})", path)
                        continue
                    got = pairs[q - 1][0].weight
                    if got != want:
                        self.add("sigma", f"clause (3): w(f_{q}) = {got} ≠ "
                                 f"sigma(prefix) = {want}", path)
        for q, (f, g) in enumerate(pairs, 1):
            self.node(f, f"{path}/seq.f[{q}]")
            self.node(g, f"{path}/seq.g[{q}]")

    def type_II(self, f, path):
        self.window(f, path)
        F, d = f.F, len(f.seq)
        self.sequence(f.seq, path + "/seq")
        if not F or any(not 1 <= q <= d for q in F) or list(F) != sorted(set(F)):
            self.add("shape", f"selection {F} is not an increasing subset of 1..{d}", path)
            return
        head = f.seq.pairs[F[0] - 1][0].vec
        if head:
            k = self.profile.card_factor
            if k * len(F) > head.min_supp:
                self.add("cardinality", f"{k}(#F) = {k * len(F)} > min supp "
                         f"f_{F[0]} = {head.min_supp}", path)
        if isinstance(f, TypeIIMinus):
            try:
                dn = u_dual_norm(dict(zip(F, f.lambdas)))
            except ResourceLimitError as exc:
                self.add("lambda-norm", f"dual norm not computable ({exc})", path)
            else:
                if dn > 1:
                    self.add("lambda-norm", f"||sum lambda_q u_q^*|| = {fmt(dn)} > 1", path)

    def convex(self, f, path):
        if any(w < 0 for w in f.weights):
            self.add("convex", "negative convex weight", path)
        total = sum(f.weights, Fraction(0))
        if total != 1:
            self.add("convex", f"weights sum to {fmt(total)}, not 1", path)
        for j, g in enumerate(f.summands):
            self.node(g, f"{path}/convex[{j + 1}]")


def validate_functional(f, profile, table=None):
    """Empty list when f lies in W under ``profile``; otherwise the violations.

    sigma values missing from ``table`` are assigned in a private copy, in
    the order the prefixes are met, so the caller's table is never changed.
    """
    table = CodingTable(profile) if table is None else table.fork()
    c = _Checker(profile, table)
    try:
        c.node(f, "")
    except DomainError as exc:
        c.add("shape", str(exc), "")
    return c.out


def is_valid(f, profile, table=None):
    return not validate_functional(f, profile, table)
