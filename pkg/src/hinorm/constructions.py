"""Finite-scale builders for the objects of the existence proofs: alpha-RIS,
(C, theta, n) exact vectors, exact pairs and nodes, dependent sequences,
the truncated operator S, and the series bound behind the operator
estimates.

A block source is either a callable ``source(after)`` returning successive
blocks with min supp > after, or an iterable of successive blocks (blocks
starting at or before ``after`` are skipped).  ``unit_blocks`` is the
canonical source: e_1, e_2, ...
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count as _count, islice

from .errors import DomainError, ResourceLimitError, Violation
from .normingset.coding import CodingTable, sigma
from .normingset.functionals import (AlphaAvg, SpecialSequence, TypeIAlpha, TypeIIMinus,
                                     TypeIIPlus, Unit, evaluate)
from .normingset.ubasis import u_norming_functional
from .normingset.validate import validate_functional
from .scc import SccWitness, make_scc, validate_scc
from .schreier import is_schreier
from .tsirelson import tsirelson_upper
from .vectors import FinVec, fmt, is_successive, lin_comb, to_fraction

MAX_CLUSTERS = 10
MAX_CLUSTER_SIZE = 1 << 12
RIS_PROBE_WEIGHTS = 4
PAIR_FLOOR = Fraction(35, 36)


# -- block sources ------------------------------------------------------------

def unit_blocks(after=0):
    """e_{after+1}, e_{after+2}, ..."""
    return (FinVec.unit(k) for k in _count(after + 1))


def blocks_after(source, after):
    if callable(source):
        return iter(source(after))
    return (b for b in source if b and b.min_supp > after)


def _norming_unit(y):
    """+-e_j^* with j the last coordinate where |y| is maximal: h(y) = ||y||_inf."""
    top = y.sup_norm()
    j, v = [(k, v) for k, v in y.items() if abs(v) == top][-1]
    return Unit(1 if v > 0 else -1, j), top


# -- alpha-RIS ----------------------------------------------------------------

@dataclass(frozen=True)
class RISWitness:
    blocks: tuple
    C: Fraction
    nks: tuple
    norm_bounds: tuple
    spot_checks: tuple = ()       # (k, weight j, |f(x_k)|)
    samples: int = 0


def _next_n(nk, block):
    """Smallest n > nk with max supp(block) / 2^n < 1 / 2^nk."""
    return nk + block.max_supp.bit_length()


def _probe_functionals(x, j, profile, offsets):
    """Type I-alpha functionals of weight j matching the signs of x.

    Greedy: successive alpha-averages over the support of x starting at a
    few offsets, sizes following the profile's growth rule, kept while the
    min-supports stay S_j-admissible.
    """
    supp = [(k, v) for k, v in x.items()]
    out = []
    for off in offsets:
        if off >= len(supp):
            break
        avgs, mins, pos, size, prev_max = [], [], off, 1, None
        while pos < len(supp):
            if prev_max is not None:
                if profile.vfg_exponential:
                    size = max(size + 1, (1 << prev_max) + 1)
                else:
                    size += 1
                if size > MAX_CLUSTER_SIZE:
                    break
            chunk = supp[pos:pos + size]
            if not is_schreier(mins + [chunk[0][0]], j):
                break
            units = [Unit(1 if v > 0 else -1, k) for k, v in chunk]
            avgs.append(AlphaAvg(size, units))
            mins.append(chunk[0][0])
            prev_max = chunk[-1][0]
            pos += size
        if avgs:
            out.append(TypeIAlpha(j, avgs))
    return out


def validate_ris(w, profile=None):
    out = []
    if not is_successive(w.blocks):
        out.append(Violation("ris-order", "blocks are not successive"))
    if len(w.nks) != len(w.blocks):
        out.append(Violation("ris-shape", "one n_k per block is required"))
        return out
    for k, (b, ub) in enumerate(zip(w.blocks, w.norm_bounds), 1):
        if ub > w.C:
            out.append(Violation("ris-norm", f"certified bound {fmt(ub)} on x_{k} exceeds C"))
    for k in range(len(w.nks) - 1):
        a, b = w.nks[k], w.nks[k + 1]
        if b <= a:
            out.append(Violation("ris-growth", f"n_{k + 2} = {b} ≤ n_{k + 1} = {a}"))
        elif not w.blocks[k].max_supp < (1 << (b - a)):
            out.append(Violation(
                "ris-growth", f"max supp x_{k + 1} / 2^n_{k + 2} ≥ 1 / 2^n_{k + 1}"))
    for k, j, val in w.spot_checks:
        if val * (1 << j) >= w.C:
            out.append(Violation("ris-sample", f"|f(x_{k})| = {fmt(val)} ≥ C/2^{j}"))
    return out


def build_ris(source, C, count, profile, n1=1, samples=3):
    """A (C, {n_k}) alpha-RIS from the first ``count`` blocks of ``source``."""
    C = to_fraction(C)
    blocks = list(islice(blocks_after(source, 0), count))
    if len(blocks) < count:
        raise ResourceLimitError(
            f"block source exhausted after {len(blocks)} of {count} blocks", required=count)
    if not is_successive(blocks):
        raise DomainError("source blocks are not successive")
    return _ris_of(blocks, C, profile, n1, samples)


def _ris_of(blocks, C, profile, n1, samples):
    bounds = []
    for k, b in enumerate(blocks, 1):
        ub = tsirelson_upper(b)
        if ub > C:
            raise DomainError(f"block {k} has certified bound {fmt(ub)} > C = {fmt(C)}")
        bounds.append(ub)
    nks = [int(n1)]
    for b in blocks[:-1]:
        nks.append(_next_n(nks[-1], b))
    checks = []
    for k, (b, nk) in enumerate(zip(blocks, nks), 1):
        for j in range(1, min(nk, RIS_PROBE_WEIGHTS + 1)):
            for f in _probe_functionals(b, j, profile, range(samples)):
                val = abs(evaluate(f, b))
                if val * (1 << j) >= C:
                    raise DomainError(f"C = {fmt(C)} is too small: a weight {j} functional "
                                      f"gives |f(x_{k})| = {fmt(val)} >= C/2^{j}")
                checks.append((k, j, val))
    return RISWitness(tuple(blocks), C, tuple(nks), tuple(bounds), tuple(checks), samples)


# -- exact vectors ------------------------------------------------------------

@dataclass(frozen=True)
class ExactVectorWitness:
    x: FinVec
    C: Fraction
    theta: Fraction
    n: int
    scc: SccWitness
    epsilon: Fraction
    ris: RISWitness = None
    certificate: object = None      # functional with certificate(x) = theta
    upper: Fraction = None
    profile_mode: str = "desk"


def paper_eps_cap(C, n):
    return Fraction(1) / (32 * to_fraction(C) * 8 ** n)


def eps_candidates(profile, C, n):
    """Values of epsilon to try, most faithful first."""
    cap = profile.eps_cap(C, n)
    if profile.eps_cap_override is None:
        return [cap / 2]
    return [e for e in (Fraction(1, 2), Fraction(3, 2)) if e < cap]


def _check_floor(blocks, C, n, profile):
    floor = profile.support_floor(C, n)
    if blocks[0].min_supp < floor:
        raise ResourceLimitError(
            f"support floor 8C*2^(2n) = {fmt(floor)} not reached (min supp is "
            f"{blocks[0].min_supp})", required=int(floor) + 1)


def build_exact_vector(blocks, C, n, profile, epsilon=None, n1=None, exact=None):
    """x = 2^n sum c_k x_k over an (n, eps) s.c.c. of the given blocks.

    The alpha-RIS structure of the chosen blocks is attached when it
    checks out (exact vector).  ``exact=True`` makes a failed check an
    error, ``exact=False`` skips it.
    """
    blocks = list(blocks)
    C = to_fraction(C)
    if not blocks or not is_successive(blocks):
        raise DomainError("blocks must be nonempty and successive")
    _check_floor(blocks, C, n, profile)
    cands = [to_fraction(epsilon)] if epsilon is not None else eps_candidates(profile, C, n)
    last = None
    for eps in cands:
        if not 0 < eps < profile.eps_cap(C, n):
            raise DomainError(f"epsilon {fmt(eps)} not below the profile cap")
        try:
            w = make_scc(blocks, n, eps)
        except ResourceLimitError as exc:
            last = exc
            continue
        x = w.vector.scale(1 << n)
        cert, theta = _lower_certificate(x, w, n, profile)
        ris = None
        if exact is not False:
            try:
                ris = _ris_of(list(w.blocks), C, profile,
                              n1 if n1 is not None else 4 ** n + 1, 1)
                bad = validate_ris(ris, profile)
            except DomainError as exc:
                ris, bad = None, [exc]
            if bad and exact:
                raise DomainError(f"blocks are not a (C, n_k) alpha-RIS: {bad[0]}")
            if bad:
                ris = None
        return ExactVectorWitness(x, C, theta, n, w, eps, ris, cert,
                                  tsirelson_upper(x), profile.mode)
    raise last


def _alpha_chain(groups, profile):
    """alpha-averages norming each group of blocks, sizes very fast growing."""
    avgs, size, prev_max = [], 0, None
    for grp in groups:
        units = [_norming_unit(y)[0] for y in grp]
        need = len(units)
        if prev_max is not None:
            need = max(need, size + 1)
            if profile.vfg_exponential:
                need = max(need, (1 << prev_max) + 1)
        size = need
        avgs.append(AlphaAvg(size, units))
        prev_max = grp[-1].max_supp
    return avgs


def _lower_certificate(x, w, n, profile):
    """Best of a weight-n type I-alpha functional and a unit functional."""
    f = TypeIAlpha(n, _alpha_chain([[b] for b in w.blocks], profile))
    val = evaluate(f, x)
    h, top = _norming_unit(x)
    if top > val:
        return h, top
    return f, val


def validate_exact_vector(w, profile):
    out = []
    C, n = w.C, w.n
    floor = profile.support_floor(C, n)
    if w.x.min_supp < floor:
        out.append(Violation("ev-floor", f"min supp {w.x.min_supp} < {fmt(floor)}"))
    if not 0 < w.epsilon < profile.eps_cap(C, n):
        out.append(Violation("ev-eps", f"epsilon {fmt(w.epsilon)} not below the cap"))
    if w.scc.epsilon != w.epsilon or w.scc.n != n or w.scc.kind != "general":
        out.append(Violation("ev-scc", "s.c.c. parameters do not match"))
    out += [Violation("ev-scc", str(v)) for v in validate_scc(w.scc)]
    if w.x != w.scc.vector.scale(1 << n):
        out.append(Violation("ev-shape", "x is not 2^n times the s.c.c."))
    if w.certificate is None or evaluate(w.certificate, w.x) < w.theta:
        out.append(Violation("ev-theta", "lower certificate does not reach theta"))
    elif validate_functional(w.certificate, profile):
        out.append(Violation("ev-theta", "lower certificate is not in W"))
    if w.ris is not None:
        out += [Violation("ev-ris", str(v)) for v in validate_ris(w.ris, profile)]
        if w.ris.nks and w.ris.nks[0] <= 4 ** n:
            out.append(Violation("ev-ris", f"n_1 = {w.ris.nks[0]} ≤ 2^(2n)"))
    # the 7C bound follows from the s.c.c. estimate only for paper-size epsilon
    if w.epsilon < paper_eps_cap(C, n) and w.upper is not None and w.upper >= 7 * C:
        out.append(Violation("ev-upper", f"upper bound {fmt(w.upper)} ≥ 7C"))
    return out


# -- exact pairs --------------------------------------------------------------

@dataclass(frozen=True)
class ExactPair:
    x: FinVec
    f: object
    n: int
    xprime: FinVec
    vector: ExactVectorWitness
    clusters: tuple = ()
    profile_mode: str = "desk"

    def value(self):
        return evaluate(self.f, self.x)


def _clusters(source, after, profile, limit):
    """z_k = sum of #F_k successive l_inf-normalized blocks, #F_k growing."""
    it = blocks_after(source, after)
    out, size, prev_max = [], 0, None
    for _ in range(limit):
        if prev_max is None:
            size = 1
        elif profile.vfg_exponential:
            size = max(size + 1, (1 << prev_max) + 1)
        else:
            size += 1
        if size > MAX_CLUSTER_SIZE:
            break
        grp = list(islice(it, size))
        if len(grp) < size:
            break
        if any(y.sup_norm() != 1 for y in grp):
            raise DomainError("cluster blocks must have sup-norm 1")
        out.append(tuple(grp))
        prev_max = grp[-1].max_supp
    if not out:
        raise ResourceLimitError("block source too short for a single cluster", required=1)
    return out


def build_exact_pair(blocks, n, eta, profile, C=None, after=0, max_clusters=MAX_CLUSTERS):
    """An n-exact pair {x, f} following the existence proof.

    Blocks are grouped into clusters z_k with growing sizes, an
    (n, eps(1-eps)) s.c.c. of clusters is formed, its last block dropped and
    the rest rescaled to an (n, eps) s.c.c., and f = 2^-n sum alpha_k with
    alpha_k the size-#F_k average norming z_k.  With eps >= 1 (possible only
    under a relaxed profile cap) the s.c.c. is formed directly.
    """
    eta = to_fraction(eta)
    if not 0 < eta < Fraction(1, 36):
        raise DomainError(f"eta must lie in (0, 1/36), got {fmt(eta)}")
    if not (profile.in_L(n, 1) or profile.in_L(n, 2)):
        raise DomainError(f"weight {n} is not in L = L1 u L2")
    C = profile.block_C if C is None else to_fraction(C)
    groups = _clusters(blocks, after, profile, max_clusters)
    zs = [lin_comb([1] * len(g), g) for g in groups]
    for k, z in enumerate(zs, 1):
        if tsirelson_upper(z) > C:
            groups, zs = groups[:k - 1], zs[:k - 1]
            break
    if not zs:
        raise ResourceLimitError("no cluster with certified norm at most C", required=1)
    _check_floor(zs, C, n, profile)
    by_min = {z.min_supp: i for i, z in enumerate(zs)}
    last = None
    for eps in eps_candidates(profile, C, n):
        target = eps * (1 - eps) if eps < 1 else eps
        try:
            w = make_scc(zs, n, target)
        except ResourceLimitError as exc:
            last = exc
            continue
        idx = [by_min[k] for k in w.psi]
        coeffs = list(w.coeffs)
        if eps < 1:
            top = coeffs[-1]
            idx, coeffs = idx[:-1], [c / (1 - top) for c in coeffs[:-1]]
        chosen = tuple(zs[i] for i in idx)
        w = SccWitness(n, eps, tuple(z.min_supp for z in chosen), tuple(coeffs),
                       "general", chosen)
        if validate_scc(w):
            last = ResourceLimitError(f"rescaled s.c.c. fails at eps = {fmt(eps)}")
            continue
        xprime = w.vector.scale(1 << n)
        f = TypeIAlpha(n, _alpha_chain([groups[i] for i in idx], profile))
        val = evaluate(f, xprime)
        if not (max(PAIR_FLOOR, 1 - eta) < val <= 1):
            last = ResourceLimitError(f"f(x') = {fmt(val)} outside (1 - eta, 1]")
            continue
        ris = _ris_of(list(chosen), C, profile, 4 ** n + 1, 1)
        vec = ExactVectorWitness(xprime, C, val, n, w, eps, ris, f,
                                 tsirelson_upper(xprime), profile.mode)
        x = xprime.scale(1 / val)
        if x.max_supp > f.vec.max_supp:
            raise DomainError("the last block must attain its sup norm at its max supp, "
                              "so that max supp x <= max supp f")
        return ExactPair(x, f, n, xprime, vec, tuple(groups[i] for i in idx), profile.mode)
    raise last


def validate_exact_pair(p, profile, table=None):
    out = []
    f, x = p.f, p.x
    if not isinstance(f, TypeIAlpha):
        out.append(Violation("pair-kind", f"f is {f.kind}, not type I-alpha"))
    elif f.weight != p.n:
        out.append(Violation("pair-weight", f"w(f) = {f.weight} ≠ {p.n}"))
    out += validate_functional(f, profile, table)
    fv = f.vec
    if not fv or x.min_supp > fv.min_supp or x.max_supp > fv.max_supp:
        out.append(Violation("pair-support", "min/max supp of x exceed those of f"))
    val = evaluate(f, p.xprime)
    if not PAIR_FLOOR < val <= 1:
        out.append(Violation("pair-value", f"f(x') = {fmt(val)} not in (35/36, 1]"))
    elif x != p.xprime.scale(1 / val):
        out.append(Violation("pair-value", "x ≠ x'/f(x')"))
    if evaluate(f, x) != 1:
        out.append(Violation("pair-value", "f(x) ≠ 1"))
    if p.vector.x != p.xprime:
        out.append(Violation("pair-vector", "exact vector witness is for another x'"))
    out += validate_exact_vector(p.vector, profile)
    return out


# -- exact nodes and dependent sequences -------------------------------------

@dataclass(frozen=True)
class ExactNode:
    xp: ExactPair
    yp: ExactPair

    x = property(lambda self: self.xp.x)
    y = property(lambda self: self.yp.x)
    f = property(lambda self: self.xp.f)
    g = property(lambda self: self.yp.f)
    n = property(lambda self: self.xp.n)

    def z(self):
        return self.x - self.y


@dataclass(frozen=True)
class DependentSeq:
    nodes: tuple
    seq: SpecialSequence
    profile_mode: str = "desk"
    table: object = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.nodes)

    @property
    def weights(self):
        return tuple(nd.n for nd in self.nodes)

    def plus_functional(self, F=None):
        F = tuple(F) if F is not None else tuple(range(1, len(self.nodes) + 1))
        return TypeIIPlus(self.seq, F)

    def clause5_certificate(self, coeffs):
        """(value, II- functional) attaining ||sum c_i u_{k_i}||_u on sum c_i z_{k_i}.

        ``coeffs`` maps node index k to c_k.
        """
        c = {int(k): to_fraction(v) for k, v in dict(coeffs).items() if to_fraction(v)}
        if not c:
            return Fraction(0), None
        value, lam = u_norming_functional(c)
        F = sorted(c)
        return value, TypeIIMinus(self.seq, F, [lam[k] for k in F])

    def combination(self, coeffs):
        items = sorted(dict(coeffs).items())
        return lin_comb([v for _, v in items], [self.nodes[k - 1].z() for k, _ in items])


def lemma66_holds(dep, k):
    """(1/2^(n_{k+1}-3)) max supp y_k < 1/2^(n_k), k 1-based."""
    a, b = dep.nodes[k - 1], dep.nodes[k]
    shift = b.n - 3 - a.n
    if shift < 0:
        return a.y.max_supp * (1 << -shift) < 1
    return a.y.max_supp < (1 << shift)


def build_dependent_sequence(blocksX, blocksY, d, profile, table=None, eta=Fraction(1, 72),
                             n1=None):
    """d exact nodes with x_k from blocksX, y_k from blocksY and sigma-chained weights.

    Under the desk profile the coding floor is small, so the builder places
    y_k far enough right that Lemma 6.6's inequality holds for the next
    weight; under the strict profile the floor alone guarantees it.
    """
    if d < 1:
        raise DomainError("a dependent sequence needs at least one node")
    if table is None:
        table = CodingTable(profile)
    n = n1 if n1 is not None else next(profile.elements(1))
    if not profile.in_L(n, 1):
        raise DomainError(f"w(f_1) = {n} is not in L1")
    nodes, vecs = [], []
    pos = 2 * d                       # keeps 2#F <= min supp f_1 for every F
    for k in range(1, d + 1):
        if k > 1:
            n = sigma(vecs, table)
        xp = build_exact_pair(blocksX, n, eta, profile, after=pos)
        gap = 0
        while True:
            yp = build_exact_pair(blocksY, n, eta, profile, after=xp.f.vec.max_supp + gap)
            if k == d or profile.is_paper_regime():
                break
            nxt = table.peek(vecs + [xp.f.vec, yp.f.vec])
            if nxt - 3 - n >= 0 and yp.x.max_supp < (1 << (nxt - 3 - n)):
                break
            gap = max(1, 2 * gap)
            if gap > 1 << 20:
                raise ResourceLimitError("no placement satisfies Lemma 6.6", required=gap)
        nodes.append(ExactNode(xp, yp))
        vecs += [xp.f.vec, yp.f.vec]
        pos = yp.f.vec.max_supp
    seq = SpecialSequence([(nd.f, nd.g) for nd in nodes])
    return DependentSeq(tuple(nodes), seq, profile.mode, table)


def validate_dependent_sequence(dep, profile):
    out = []
    table = dep.table
    for k, nd in enumerate(dep.nodes, 1):
        for name, p in (("x", nd.xp), ("y", nd.yp)):
            out += [Violation(v.code, f"node {k} {name}: {v.message}")
                    for v in validate_exact_pair(p, profile, table)]
        if nd.xp.n != nd.yp.n:
            out.append(Violation("node-weight", f"node {k}: pair weights differ"))
        if not nd.f.vec.max_supp < nd.y.min_supp:
            out.append(Violation("node-order", f"node {k}: max supp f ≥ min supp y"))
        if k < len(dep.nodes) and not nd.g.vec.max_supp < dep.nodes[k].x.min_supp:
            out.append(Violation("node-order", f"node {k}: max supp g ≥ min supp x_next"))
    out += validate_functional(dep.plus_functional([1]), profile, table)
    return out


def remark65_identities(node):
    """The five exact identities of an exact node, as (name, value, expected)."""
    f, g, x, y = node.f, node.g, node.x, node.y
    ev = evaluate
    return [
        ("(f+g)(x+y)", ev(f, x + y) + ev(g, x + y), Fraction(2)),
        ("(f-g)(x-y)", ev(f, x - y) - ev(g, x - y), Fraction(2)),
        ("(f+g)(x-y)", ev(f, x - y) + ev(g, x - y), Fraction(0)),
        ("(f+g)(x)", ev(f, x) + ev(g, x), Fraction(1)),
        ("(f+g)(y)", ev(f, y) + ev(g, y), Fraction(1)),
    ]


# -- the truncated operator S -------------------------------------------------

def finite_operator_S(dep, ks):
    """Matrix of S x = sum_n (f_{k_n}+g_{k_n})(x) (x_{k_n} - y_{k_n}) on
    span{x_{k_1}, y_{k_1}, x_{k_2}, ...} in that basis order.

    Returns (matrix, labels); column j holds the coordinates of S b_j.
    """
    ks = [int(k) for k in ks]
    if any(not 1 <= k <= len(dep.nodes) for k in ks) or len(set(ks)) != len(ks):
        raise DomainError(f"indices {ks} outside 1..{len(dep.nodes)} or repeated")
    basis, labels = [], []
    for k in ks:
        nd = dep.nodes[k - 1]
        basis += [nd.x, nd.y]
        labels += [f"x{k}", f"y{k}"]
    m = len(basis)
    M = [[Fraction(0)] * m for _ in range(m)]
    for j, b in enumerate(basis):
        for i, k in enumerate(ks):
            nd = dep.nodes[k - 1]
            c = evaluate(nd.f, b) + evaluate(nd.g, b)
            M[2 * i][j] += c
            M[2 * i + 1][j] -= c
    return M, labels


def mat_mul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)]
            for row in A]


def identity(m):
    return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]


def mat_add(A, B, s=1):
    return [[a + s * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


# -- the series bound ---------------------------------------------------------

def int_root(n, k):
    """floor(n^(1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise DomainError("int_root needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)      # an upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _pow_bounds(base, e, bits):
    """Rational lo <= base^e <= hi for integer base >= 1, rational e >= 0."""
    e = to_fraction(e)
    a, b = e.numerator, e.denominator
    N = base ** a << (b * bits)
    r = int_root(N, b)
    lo = Fraction(r, 1 << bits)
    hi = lo if r ** b == N else Fraction(r + 1, 1 << bits)
    return lo, hi


def _ceil_pow(base, e):
    """ceil(base^e) exactly."""
    e = to_fraction(e)
    a, b = e.numerator, e.denominator
    N = base ** a
    r = int_root(N, b)
    return r if r ** b == N else r + 1


@dataclass(frozen=True)
class SeriesBound:
    partial_upper: Fraction
    alpha_lower: Fraction
    alpha_upper: Fraction
    ts: tuple

    @property
    def holds(self):
        return self.partial_upper <= self.alpha_lower

    def __iter__(self):
        return iter((self.partial_upper, self.alpha_lower))


def series_alpha_bound(qprime, p, J, bits=96):
    """Outward-rounded sum_{j<=J} t_j^(1/p)/2^j against
    alpha = 8^(q'/p) sum_{j>=1} 2^(-(1-q'/p) j) + 1, t_j = ceil((4*2^(j+1))^q')."""
    qprime, p = to_fraction(qprime), to_fraction(p)
    if qprime <= 1:
        raise DomainError("q' must exceed 1")
    if p <= qprime:
        raise DomainError("p must exceed q'")
    ts, total = [], Fraction(0)
    inv_p = 1 / p
    for j in range(1, J + 1):
        t = _ceil_pow(2, (j + 3) * qprime)
        ts.append(t)
        _, hi = _pow_bounds(t, inv_p, bits)
        total += hi / (1 << j)
    ratio = qprime / p
    e8_lo, e8_hi = _pow_bounds(2, 3 * ratio, bits)
    # r = 2^-(1 - q'/p); r/(1-r) is increasing in r
    d_lo, d_hi = _pow_bounds(2, 1 - ratio, bits)
    r_lo, r_hi = 1 / d_hi, 1 / d_lo
    alpha_lo = e8_lo * r_lo / (1 - r_lo) + 1
    alpha_hi = e8_hi * r_hi / (1 - r_hi) + 1
    return SeriesBound(total, alpha_lo, alpha_hi, tuple(ts))
