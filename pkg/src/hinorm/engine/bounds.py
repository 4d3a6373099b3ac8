"""Certified lower and upper bounds for the norm of X.

Lower bounds come from functionals of W found by search: the largest unit,
greedy type I-alpha assemblies over sign-aligned coordinates, anything the
hints carry (the functional of an exact pair, clause 5 certificates over a
dependent sequence), each polished by local moves.

Upper bounds are derivation rules.  Each rule re-checks its hypotheses and
recomputes its value from a payload, so a certificate can be replayed:

    l1          ||x|| <= sum |x_k|, as |f(e_k)| <= 1 on W
    unit-T      ||x|| <= ||x||_T, as W sits in the dual unit ball of T
    blocks      ||sum c_k x_k|| <= 6 ||sum c_k b_k e_{max supp x_k}||_T, ||x_k|| <= b_k
    cor2.6      ||sum c_k x_k|| <= 6/2^n + 12 eps for an (n, eps) s.c.c., ||x_k|| <= 1
    remark2.11  ||x|| < 7C for a (C, theta, n) vector
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from ..errors import IntegrityError, ResourceLimitError
from ..normingset.functionals import (AlphaAvg, TypeIAlpha, Unit, Zero, evaluate, negate)
from ..normingset.validate import validate_functional
from ..scc import validate_scc
from ..schreier import is_schreier
from ..tsirelson import EXACT_THRESHOLD, max_subset_excess, tsirelson_norm
from ..vectors import FinVec, fmt, is_successive, lin_comb, to_fraction
from .certs import Certificate, NormInterval

@dataclass(frozen=True)
class Budget:
    """Search limits: nesting depth, weights tried, start offsets, local moves,
    most slots filled per average and the number of candidates kept."""
    depth: int = 1
    max_weight: int = 3
    offsets: int = 3
    improve: int = 4
    max_size: int = 256
    candidates: int = None
    tsirelson_threshold: int = EXACT_THRESHOLD

    @classmethod
    def of(cls, budget):
        if budget is None:
            return cls()
        if isinstance(budget, cls):
            return budget
        if isinstance(budget, int):
            # a bare integer scales every limit together
            b = max(1, budget)
            return cls(depth=min(b, 2), max_weight=b + 2, offsets=b + 2, improve=4 * b)
        return cls(**dict(budget))


# -- block norm certificates -------------------------------------------------

def block_bound(b, threshold=EXACT_THRESHOLD):
    """A certified upper bound for ||b||: its T-norm when small, else l1."""
    if len(b) <= threshold:
        return min(b.l1_norm(), tsirelson_norm(b, threshold))
    return b.l1_norm()


# -- derivation rules -------------------------------------------------------

def _rule_l1(x, payload, profile):
    return x.l1_norm()


def _rule_unit_T(x, payload, profile):
    if profile.card_factor < 2:
        raise IntegrityError("T-domination needs the rule 2(#F) <= min supp")
    return tsirelson_norm(x, payload.get("threshold", EXACT_THRESHOLD))


def _rule_blocks(x, payload, profile):
    blocks, coeffs = payload["blocks"], payload["coeffs"]
    threshold = payload.get("threshold", EXACT_THRESHOLD)
    if not is_successive(blocks) or lin_comb(coeffs, blocks) != x:
        raise IntegrityError("x is not the stated combination of successive blocks")
    bounds = [block_bound(b, threshold) for b in blocks]
    proj = lin_comb([c * b for c, b in zip(coeffs, bounds)],
                    [FinVec.unit(y.max_supp) for y in blocks])
    lam = payload.get("lam")
    if len(proj) > threshold and lam is not None:
        # ||v||_T <= lam ||v||_1 + max_G (||v_G||_T - lam sum_G |v_k|)
        lam = to_fraction(lam)
        return 6 * (lam * proj.l1_norm() + max_subset_excess(proj, lam)[0])
    return 6 * tsirelson_norm(proj, threshold)


def _scc_bound(w, threshold):
    bad = validate_scc(w)
    if bad:
        raise IntegrityError(f"s.c.c. witness fails: {bad[0]}")
    if w.kind == "basic":
        return Fraction(1)
    return max(block_bound(b, threshold) for b in w.blocks)


def _rule_cor26(x, payload, profile):
    w, factor = payload["scc"], to_fraction(payload.get("factor", 1))
    if w.vector.scale(factor) != x:
        raise IntegrityError("x is not the stated multiple of the s.c.c.")
    B = _scc_bound(w, payload.get("threshold", EXACT_THRESHOLD))
    return abs(factor) * B * (Fraction(6, 1 << w.n) + 12 * w.epsilon)


def remark211_applies(ev, threshold=EXACT_THRESHOLD):
    """Do the (C, theta, n) hypotheses behind ||x|| < 7C hold for a witness?"""
    C, n, w = ev.C, ev.n, ev.scc
    if not 0 < ev.epsilon < Fraction(1) / (32 * C * 8 ** n) or w.epsilon != ev.epsilon:
        return False
    if w.n != n or ev.x != w.vector.scale(1 << n) or validate_scc(w):
        return False
    if ev.x.min_supp < 8 * C * 4 ** n:
        return False
    blocks = w.blocks if w.kind == "general" else [FinVec.unit(k) for k in w.psi]
    return all(block_bound(b, threshold) <= C for b in blocks)


def _rule_remark211(x, payload, profile):
    ev, factor = payload["vector"], to_fraction(payload.get("factor", 1))
    if ev.x.scale(factor) != x:
        raise IntegrityError("x is not the stated multiple of the exact vector")
    if not remark211_applies(ev, payload.get("threshold", EXACT_THRESHOLD)):
        raise IntegrityError("the (C, theta, n) hypotheses do not hold")
    return abs(factor) * 7 * ev.C


RULES = {
    "l1": _rule_l1,
    "unit-T": _rule_unit_T,
    "blocks": _rule_blocks,
    "cor2.6": _rule_cor26,
    "remark2.11": _rule_remark211,
}
_KIND = {"l1": "lemma-bound", "unit-T": "tsirelson-domination",
         "blocks": "tsirelson-domination", "cor2.6": "lemma-bound",
         "remark2.11": "lemma-bound"}


def _cert(name, x, payload, profile):
    value = RULES[name](x, payload, profile)
    return Certificate(_KIND[name], value, payload, name=name)


# -- upper bounds -----------------------------------------------------------

def _hint_vector(hints):
    """(exact-vector witness, factor) from a vector or pair hint."""
    if hints.get("exact_vector") is not None:
        return hints["exact_vector"], Fraction(1)
    p = hints.get("pair")
    if p is not None:
        return p.vector, Fraction(1) / evaluate(p.f, p.xprime)
    return None, None


def upper_candidates(x, hints=None, profile=None, threshold=EXACT_THRESHOLD):
    """Every applicable upper certificate, in a fixed order."""
    hints = dict(hints or {})
    out = [_cert("l1", x, {}, profile)]
    if profile is None or profile.card_factor >= 2:
        if len(x) <= threshold:
            out.append(_cert("unit-T", x, {"threshold": threshold}, profile))
    blocks = hints.get("blocks")
    if blocks is not None:
        payload = {"blocks": tuple(blocks), "coeffs": tuple(hints["coeffs"]),
                   "threshold": threshold}
        try:
            out.append(_cert("blocks", x, payload, profile))
        except (IntegrityError, ResourceLimitError):
            pass
    w = hints.get("scc")
    if w is not None:
        factor = to_fraction(hints.get("factor", 1))
        try:
            out.append(_cert("cor2.6", x, {"scc": w, "factor": factor,
                                           "threshold": threshold}, profile))
        except IntegrityError:
            pass
    ev, factor = _hint_vector(hints)
    if ev is not None:
        payload = {"scc": ev.scc, "factor": factor * (1 << ev.n), "threshold": threshold}
        try:
            out.append(_cert("cor2.6", x, payload, profile))
        except IntegrityError:
            pass
        if remark211_applies(ev, threshold):
            out.append(_cert("remark2.11", x, {"vector": ev, "factor": factor,
                                               "threshold": threshold}, profile))
    return out


def _least(certs):
    best = certs[0]
    for c in certs[1:]:
        if c.value < best.value:
            best = c
    return best


def norm_upper(x, hints=None, profile=None, threshold=EXACT_THRESHOLD):
    """(bound, certificate): the least applicable certified upper bound."""
    c = _least(upper_candidates(x, hints, profile, threshold))
    return c.value, c


# -- lower bounds: greedy type I-alpha assembly --------------------------------

def _atoms(x, depth, profile, budget):
    """Slots an average may hold: (first index, last index, functional, value).

    Depth 1 offers the sign-aligned units; deeper levels also offer the best
    shallower functional on each tile of 2, 4, ... consecutive coordinates,
    found with the default limits so that tiles do not depend on the budget.
    """
    supp = list(x.items())
    units = [(k, k, Unit(1 if v > 0 else -1, k), abs(v)) for k, v in supp]
    tilings = [units]
    if depth > 1:
        t = 2
        while t <= min(len(supp), 16):
            tiles = []
            for i in range(0, len(supp), t):
                part = FinVec(supp[i:i + t])
                best = None
                for f in _greedy_family(part, depth - 1, profile, Budget(depth=depth - 1)):
                    v = evaluate(f, part)
                    if best is None or v > best[3]:
                        best = (part.min_supp, part.max_supp, f, v)
                if best is not None and best[3] > 0:
                    tiles.append(best)
            tilings.append(tiles)
            t *= 2
    return tilings


def _group_ok(groups, sizes, j, profile):
    if not groups:
        return False
    mins = [g[0][0] for g in groups]
    if not is_schreier(mins, j):
        return False
    for q in range(1, len(groups)):
        if not profile.vfg_ok(sizes[q], sizes[q - 1], groups[q - 1][-1][1]):
            return False
    return all(len(g) <= s for g, s in zip(groups, sizes))


def _next_size(prev_size, prev_max, profile):
    """Smallest size allowed after an average of size prev_size ending at prev_max.

    A size is only the divisor of an average, so huge sizes cost nothing.
    """
    if prev_size is None:
        return 1
    s = prev_size + 1
    if profile.vfg_exponential:
        s = max(s, (1 << prev_max) + 1)
    return s


def _greedy_groups(atoms, j, offset, profile, budget):
    """Successive groups of at most max_size atoms, sizes the smallest allowed."""
    groups, sizes = [], []
    pos = offset
    while pos < len(atoms):
        s = _next_size(sizes[-1] if sizes else None,
                       groups[-1][-1][1] if groups else 0, profile)
        chunk = atoms[pos:pos + min(s, budget.max_size)]
        if not is_schreier([g[0][0] for g in groups] + [chunk[0][0]], j):
            break
        groups.append(chunk)
        sizes.append(s)
        pos += len(chunk)
    return groups, sizes


def _value(groups, sizes, j):
    total = Fraction(0)
    for g, s in zip(groups, sizes):
        total += sum((a[3] for a in g), Fraction(0)) / s
    return total / (1 << j)


def _improve(groups, sizes, j, profile, rounds):
    """Hill climbing over moves that keep the assembly admissible."""
    best = _value(groups, sizes, j)
    for _ in range(rounds):
        moves = []
        for q in range(len(groups)):
            g = groups[q]
            if len(g) > 1:
                moves.append((q, "drop-first"))
                moves.append((q, "drop-last"))
            moves.append((q, "remove"))
            moves.append((q, "shrink-size"))
        found = None
        for q, kind in moves:
            G, S = [list(g) for g in groups], list(sizes)
            if kind == "drop-first":
                G[q] = G[q][1:]
            elif kind == "drop-last":
                G[q] = G[q][:-1]
            elif kind == "remove":
                del G[q], S[q]
            else:
                S[q] = max(len(G[q]), 1)
                if S[q] == sizes[q]:
                    continue
            if not _group_ok(G, S, j, profile):
                continue
            v = _value(G, S, j)
            if v > best and (found is None or v > found[0]):
                found = (v, G, S)
        if found is None:
            break
        best, groups, sizes = found
    return groups, sizes


def _assemble(groups, sizes, j):
    avgs = [AlphaAvg(s, [a[2] for a in g]) for g, s in zip(groups, sizes)]
    return TypeIAlpha(j, avgs)


def _greedy_family(x, depth, profile, budget):
    """Deterministic list of type I-alpha candidates for x."""
    out = []
    if not x:
        return out
    for atoms in _atoms(x, depth, profile, budget):
        for j in range(1, budget.max_weight + 1):
            for off in range(min(budget.offsets, len(atoms))):
                groups, sizes = _greedy_groups(atoms, j, off, profile, budget)
                if not groups:
                    continue
                out.append(_assemble(groups, sizes, j))
                if budget.improve:
                    g2, s2 = _improve(groups, sizes, j, profile, budget.improve)
                    if (g2, s2) != (groups, sizes):
                        out.append(_assemble(g2, s2, j))
    return out


# -- lower bounds -----------------------------------------------------------

def _hint_functionals(x, hints):
    """(functional, coding table) pairs carried by the hints."""
    out = []
    for f in hints.get("functionals", ()):
        out.append((f, hints.get("table")))
    p = hints.get("pair")
    if p is not None:
        out.append((p.f, None))
    ev = hints.get("exact_vector")
    if ev is not None and ev.certificate is not None:
        out.append((ev.certificate, None))
    dep = hints.get("dep")
    if dep is not None:
        coeffs = hints.get("coeffs")
        if coeffs:
            _, g = dep.clause5_certificate(coeffs)
            if g is not None:
                out.append((g, dep.table))
        for q in range(1, len(dep) + 1):
            out.append((dep.plus_functional([q]), dep.table))
        out.append((dep.plus_functional(), dep.table))
    return out


def lower_candidates(x, budget=None, profile=None, hints=None):
    """Deterministic candidate list of (functional, table)."""
    budget = Budget.of(budget)
    hints = dict(hints or {})
    cands = _hint_functionals(x, hints)
    if x:
        top = x.sup_norm()
        k, v = next((k, v) for k, v in x.items() if abs(v) == top)
        cands.append((Unit(1 if v > 0 else -1, k), None))
        family = _greedy_family(x, budget.depth, profile, budget)
        if budget.candidates is not None:
            family = family[:budget.candidates]
        cands += [(f, None) for f in family]
    return cands


def _score(item, x, profile):
    f, table = item
    v = evaluate(f, x)
    if v < 0:
        f, v = negate(f), -v
    if validate_functional(f, profile, table):
        return None
    return v, f, table


def norm_lower(x, budget=None, profile=None, hints=None, threads=1):
    """(bound, certificate) with a validated functional f, f(x) = bound."""
    if profile is None:
        from ..normingset.profile import make_profile
        profile = make_profile("desk")
    if not x:
        return Fraction(0), Certificate("functional-witness", Fraction(0), Zero())
    cands = lower_candidates(x, budget, profile, hints)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scored = list(pool.map(lambda c: _score(c, x, profile), cands))
    else:
        scored = [_score(c, x, profile) for c in cands]
    best = None
    for s in scored:                      # first maximum in candidate order
        if s is not None and (best is None or s[0] > best[0]):
            best = s
    v, f, table = best
    return v, Certificate("functional-witness", v, f, table=table)


def norm_interval(x, budget=None, hints=None, profile=None, threads=1):
    """Lower and upper bounds, both replayed before they are returned."""
    if profile is None:
        from ..normingset.profile import make_profile
        profile = make_profile("desk")
    hints = dict(hints or {})
    threshold = Budget.of(budget).tsirelson_threshold
    lo, lc = norm_lower(x, budget, profile, hints, threads)
    uppers = upper_candidates(x, hints, profile, threshold)
    hc = _least(uppers)
    lc.replay(x, profile)
    for c in uppers:
        c.replay(x, profile)
        if lo > c.value:
            raise IntegrityError(f"lower bound {fmt(lo)} exceeds {c.label} = {fmt(c.value)}")
    return NormInterval(x, lo, lc, hc.value, hc, tuple(c for c in uppers if c is not hc))
