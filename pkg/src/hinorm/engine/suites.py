"""Inequality suites: one per testable statement, each a list of checked
instances reported as JSON lines.

A record carries the suite, profile, seed, instance number, a hash of the
instance's canonical text, the largest left-hand side seen against its
bound (as num/den strings) and a verdict.  Records of profile-independent
checks get the verdict "violation" when a check fails; records of
constant-sensitive sampled checks get "flagged", since desk-scale
parameters may break the statement's hypotheses.
"""
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..constructions import (build_dependent_sequence, build_exact_vector, finite_operator_S,
                             identity, lemma66_holds, mat_add, mat_mul, remark65_identities,
                             series_alpha_bound, validate_dependent_sequence)
from ..errors import DomainError, ResourceLimitError
from ..normingset.functionals import evaluate, separates, weight_set
from ..normingset.ubasis import u_norm
from ..normingset.validate import validate_functional
from ..scc import make_basic_scc, make_scc, max_mass, validate_scc
from ..tsirelson import max_subset_excess
from ..vectors import FinVec, fmt, lin_comb
from .bounds import RULES, block_bound, norm_lower
from .sampling import instance_rng, sample_functionals

INDEPENDENT = "independent"
SAMPLED = "sampled"


def _hash(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class Record:
    suite: str
    instance: int
    text: str                     # canonical instance text, hashed into the report
    kind: str = INDEPENDENT
    check: str = ""
    checks: int = 0
    violations: int = 0
    lhs: Fraction = Fraction(0)
    rhs: Fraction = Fraction(0)
    note: str = ""
    detail: dict = field(default_factory=dict)

    def see(self, lhs, rhs, ok):
        """Count one comparison; keep the tightest one (largest lhs - rhs)."""
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        if self.checks == 0 or lhs - rhs > self.lhs - self.rhs:
            self.lhs, self.rhs = lhs, rhs
        self.checks += 1
        if not ok:
            self.violations += 1

    @property
    def verdict(self):
        if not self.violations:
            return "ok"
        return "violation" if self.kind == INDEPENDENT else "flagged"

    def as_dict(self, profile, seed):
        out = {
            "suite": self.suite, "check": self.check or self.suite, "kind": self.kind,
            "profile": profile.mode, "seed": seed, "instance": self.instance,
            "hash": _hash(self.text), "checks": self.checks,
            "violations": self.violations, "lhs": fmt(self.lhs), "rhs": fmt(self.rhs),
            "verdict": self.verdict,
        }
        if self.note:
            out["note"] = self.note
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteReport:
    name: str
    profile: object
    seed: int
    records: list

    @property
    def checks(self):
        return sum(r.checks for r in self.records)

    @property
    def violations(self):
        return sum(r.violations for r in self.records)

    @property
    def independent_violations(self):
        return sum(r.violations for r in self.records if r.kind == INDEPENDENT)

    @property
    def flagged(self):
        return sum(r.violations for r in self.records if r.kind == SAMPLED)

    def lines(self):
        for r in self.records:
            yield json.dumps(r.as_dict(self.profile, self.seed), sort_keys=True,
                             ensure_ascii=True, separators=(",", ":"))

    def to_jsonl(self):
        return "".join(line + "\n" for line in self.lines())

    def summary(self):
        return (f"{self.name}: {len(self.records)} records, {self.checks} checks, "
                f"{self.independent_violations} violations, {self.flagged} flagged")


# -- instance generators ----------------------------------------------------------

def random_blocks(key):
    """Block source: successive blocks of sup-norm 1 with one or two coordinates,
    peaking at their last coordinate so that exact pairs cover them.

    Their T-norm is 1, so each has norm at most 1 in X.  The block starting
    at a position depends only on (key, position).
    """
    def source(after):
        p = after + 1
        while True:
            rng = instance_rng(key, "block", p)
            a = 1 if rng.random() < 0.5 else -1
            if rng.random() < 0.5:
                b = FinVec.unit(p, a)
                p += 1
            else:
                first = rng.choice((Fraction(1), Fraction(1, 2), Fraction(-1, 2)))
                b = FinVec({p: first, p + 1: a})
                p += 2
            p += rng.randint(0, 1)
            yield b
    return source


def _index_stream(rng, start):
    k = start
    while True:
        yield k
        k += rng.randint(1, 2)


def _dep(seed, i, profile, d):
    return build_dependent_sequence(random_blocks(f"{seed}:x:{i}"),
                                    random_blocks(f"{seed}:y:{i}"), d, profile)


def _dep_text(dep):
    return "".join(nd.x.dumps() + nd.y.dumps() for nd in dep.nodes)


def _exact_vector(seed, i, n, profile, tag):
    rng = instance_rng(seed, f"{tag}:{i}")
    src = random_blocks(f"{seed}:{tag}:{i}")
    after = rng.randint(0, 20)
    it = src(after)
    blocks = [next(it) for _ in range(64)]
    return build_exact_vector(blocks, 1, n, profile, exact=False)


def _decomposition(ev):
    """(blocks, coefficients c_k) with x = 2^n sum c_k x_k."""
    return list(ev.scc.blocks), list(ev.scc.coeffs)


def _eps_note(ev):
    cap = Fraction(1) / (32 * ev.C * 8 ** ev.n)
    if ev.epsilon < cap and ev.x.min_supp >= 8 * ev.C * 4 ** ev.n:
        return ""
    return (f"hypotheses need eps < {fmt(cap)} and min supp >= {fmt(8 * ev.C * 4 ** ev.n)}; "
            f"instance has eps = {fmt(ev.epsilon)}, min supp {ev.x.min_supp}")


# -- suites ---------------------------------------------------------------------

def suite_prop24(p, profile, seed, i):
    """||sum_{k in G} c_k e_k||_T <= 2^-n sum_{k in G} c_k + eps over every G."""
    rng = instance_rng(seed, f"prop2.4:{i}")
    n = 1 + i % 2
    eps = rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)] +
                     ([Fraction(1, 5), Fraction(1, 8)] if n == 1 else []))
    w = make_basic_scc(_index_stream(rng, rng.randint(1, 12)), n, eps)
    rec = Record("prop2.4", i, w.sexpr())
    bad = validate_scc(w)
    rec.see(len(bad), 0, not bad)
    excess, G = max_subset_excess(w.vector, Fraction(1, 1 << n))
    rec.see(excess, eps, excess <= eps)
    rec.detail = {"n": n, "eps": fmt(eps), "support": len(w.psi),
                  "worst_G": [int(k) for k in G]}
    return [rec]


def suite_cor26(p, profile, seed, i):
    """Sampled f(x) and the T-domination certificate stay below 6/2^n + 12 eps."""
    rng = instance_rng(seed, f"cor2.6:{i}")
    n, eps = [(1, Fraction(1, 4)), (1, Fraction(1, 8)), (2, Fraction(1, 2)),
              (1, Fraction(1, 3))][i % 4]
    src = random_blocks(f"{seed}:cor2.6:{i}")(rng.randint(0, 10))
    blocks = [next(src) for _ in range(160)]
    w = make_scc(blocks, n, eps)
    x = w.vector
    bound = Fraction(6, 1 << n) + 12 * eps
    rec = Record("cor2.6", i, w.sexpr(), kind=SAMPLED, check="cor2.6-sampled")
    for f in sample_functionals(x, p["samples"], seed, profile, instance=f"cor2.6:{i}"):
        v = abs(evaluate(f, x))
        rec.see(v, bound, v <= bound)
    dom = Record("cor2.6", i, w.sexpr(), check="cor2.6-domination")
    units = [block_bound(b) <= 1 for b in w.blocks]
    payload = {"blocks": tuple(w.blocks), "coeffs": tuple(w.coeffs),
               "lam": Fraction(1, 1 << n)}
    value = RULES["blocks"](x, payload, profile) if all(units) else None
    dom.see(value if value is not None else bound + 1, bound,
            value is not None and value <= bound)
    rec.detail = dom.detail = {"n": n, "eps": fmt(eps), "blocks": len(w.blocks)}
    return [rec, dom]


def suite_cor38(p, profile, seed, i):
    """|f(x)| < (6C + 2^-n)/2^j for type I-alpha f of weight j < n."""
    n = 2 + i % 2
    ev = _exact_vector(seed, i, n, profile, "cor3.8")
    x, C = ev.x, ev.C
    rec = Record("cor3.8", i, x.dumps(), kind=SAMPLED, note=_eps_note(ev))
    hints = {"weights": list(range(1, n))}
    for f in sample_functionals(x, p["samples"], seed, profile, hints, f"cor3.8:{i}",
                                clauses=("I-alpha",)):
        j = f.weight
        if j >= n:
            continue
        v = abs(evaluate(f, x))
        bound = (6 * C + Fraction(1, 1 << n)) / (1 << j)
        rec.see(v, bound, v < bound)
    rec.detail = {"n": n, "C": fmt(C), "eps": fmt(ev.epsilon)}
    return [rec]


def _meets(rng_a, rng_b):
    return rng_a[0] <= rng_b[1] and rng_b[0] <= rng_a[1]


def suite_lemma313(p, profile, seed, i):
    """|beta(x)| < 8C/s(beta) + C 2^n sum_{k in F} c_k for some S_2 set F in G_beta."""
    n = 2 + i % 2
    ev = _exact_vector(seed, i, n, profile, "lemma3.13")
    x, C = ev.x, ev.C
    blocks, c = _decomposition(ev)
    rec = Record("lemma3.13", i, x.dumps(), kind=SAMPLED, note=_eps_note(ev))
    for f in sample_functionals(x, p["samples"], seed, profile, {}, f"lemma3.13:{i}",
                                clauses=("I-beta",)):
        for beta in f.averages:
            bv = beta.vec
            if not bv:
                continue
            G = [k for k, b in enumerate(blocks) if _meets(bv.range, b.range)]
            try:
                mass, _ = max_mass([blocks[k].min_supp for k in G], [c[k] for k in G], 2)
            except ResourceLimitError:
                mass = sum((c[k] for k in G), Fraction(0))
            v = abs(evaluate(beta, x))
            bound = Fraction(8) * C / beta.size + C * (1 << n) * mass
            rec.see(v, bound, v < bound)
    rec.detail = {"n": n, "C": fmt(C), "eps": fmt(ev.epsilon)}
    return [rec]


def suite_lemma314(p, profile, seed, i):
    """sum_q |beta_q(x)| < sum_q 8C/s(beta_q) + 2^-n for S_j families, j <= n - 3."""
    n = 4 + i % 2
    ev = _exact_vector(seed, i, n, profile, "lemma3.14")
    x, C = ev.x, ev.C
    rec = Record("lemma3.14", i, x.dumps(), kind=SAMPLED, note=_eps_note(ev))
    hints = {"weights": list(range(1, n - 2))}
    for f in sample_functionals(x, p["samples"], seed, profile, hints, f"lemma3.14:{i}",
                                clauses=("I-beta",)):
        if f.weight > n - 3:
            continue
        avgs = f.averages
        v = sum((abs(evaluate(b, x)) for b in avgs), Fraction(0))
        bound = sum((Fraction(8) * C / b.size for b in avgs), Fraction(0)) + \
            Fraction(1, 1 << n)
        rec.see(v, bound, v < bound)
        if avgs and avgs[0].size >= x.min_supp:
            rec.see(v, Fraction(2, 1 << n), v < Fraction(2, 1 << n))
    rec.detail = {"n": n, "C": fmt(C), "eps": fmt(ev.epsilon)}
    return [rec]


def suite_cor312(p, profile, seed, i):
    """|f(x)| < sum_{q in E_1} 7C/2^{i_q} + 2C/2^n for type II f avoiding n..2^(2n)."""
    n = 2 + i % 2
    ev = _exact_vector(seed, i, n, profile, "cor3.12")
    x, C = ev.x, ev.C
    rec = Record("cor3.12", i, x.dumps(), kind=SAMPLED, note=_eps_note(ev))
    top = 1 << (2 * n)
    for f in sample_functionals(x, p["samples"], seed, profile, {}, f"cor3.12:{i}",
                                clauses=("II+", "II-")):
        if any(n <= w <= top for w in weight_set(f)):
            continue
        ws = [f.seq.pairs[q - 1][0].weight for q in f.F]
        bound = sum((Fraction(7) * C / (1 << w) for w in ws if w < n), Fraction(0)) + \
            Fraction(2) * C / (1 << n)
        v = abs(evaluate(f, x))
        rec.see(v, bound, v < bound)
    rec.detail = {"n": n, "C": fmt(C), "eps": fmt(ev.epsilon)}
    return [rec]


def _c0_config(seed, i):
    """x_1 < ... < x_n of norm <= 1 with the j_k of the finite c_0 statement."""
    rng = instance_rng(seed, f"prop5.1:{i}")
    n = 3 + i % 3
    pos = n * (1 << n) + 1 + rng.randint(0, 4)
    xs = []
    for _ in range(n):
        if rng.random() < 0.5:
            xs.append(FinVec.unit(pos, rng.choice((1, -1))))
            pos += 1
        else:
            xs.append(FinVec({pos: Fraction(1, 2), pos + 1: Fraction(rng.choice((1, -1)), 2)}))
            pos += 2
        pos += rng.randint(1, 6)
    js = [n + 3]
    for x in xs[:-1]:
        js.append(max(js[-1] + 1, n + x.max_supp.bit_length()))
    return n, xs, js


def _c0_hypotheses(f, n, xs, js):
    """Which of (i), (ii), (iv) the functional f shows to fail, if any."""
    small = Fraction(1, n << n)
    broken = []
    if f.kind in ("I-alpha", "I-beta") and f.averages:
        tag = "(i)" if f.kind == "I-alpha" else "(ii)"
        for k0 in range(len(xs)):
            if f.weight < js[k0] and f.averages[0].size > xs[k0].min_supp:
                for x in xs[k0:]:
                    if sum((abs(evaluate(a, x)) for a in f.averages), Fraction(0)) >= small:
                        broken.append(tag)
                        break
    if f.is_type_II:
        for a in range(len(xs)):
            for b in range(a + 1, len(xs)):
                for c in range(b + 1, len(xs)):
                    try:
                        sep = separates(f, xs[a], xs[b], xs[c])
                    except DomainError:
                        continue
                    if sep and all(abs(evaluate(f, xs[t])) >= small for t in (a, b, c)):
                        broken.append("(iv)")
    return sorted(set(broken))


def suite_prop51(p, profile, seed, i):
    """|f(sum x_k)| <= 4 + 5/2^n, and < (4 + 6/2^n)/2^j for type I-alpha of weight j < j_1;
    with the two estimates of the c_0 spreading model alongside."""
    n, xs, js = _c0_config(seed, i)
    s = lin_comb([1] * n, xs)
    text = "".join(x.dumps() for x in xs)
    recs = {name: Record("prop5.1", i, text, kind=SAMPLED, check=name)
            for name in ("prop5.1-upper", "prop5.1-weighted", "prop5.2-sum", "prop5.2-weighted")}
    broken = set()
    for f in sample_functionals(s, p["samples"], seed, profile, {"weights": [1, 2]},
                                f"prop5.1:{i}"):
        broken.update(_c0_hypotheses(f, n, xs, js))
        v = abs(evaluate(f, s))
        up = 4 + Fraction(5, 1 << n)
        recs["prop5.1-upper"].see(v, up, v <= up)
        recs["prop5.2-sum"].see(v, 5, v <= 5)
        if f.kind == "I-alpha":
            j = f.weight
            if j < js[0]:
                b = (4 + Fraction(6, 1 << n)) / (1 << j)
                recs["prop5.1-weighted"].see(v, b, v < b)
            if j < js[-1]:
                b = Fraction(5, 1 << j)
                recs["prop5.2-weighted"].see(v, b, v < b)
    note = f"hypotheses {', '.join(sorted(broken))} fail on sampled functionals" if broken else ""
    for r in recs.values():
        r.note = note
        r.detail = {"n": n, "j": js}
    return list(recs.values())


def suite_remark65(p, profile, seed, i):
    """(f+g)(x+y) = 2, (f-g)(x-y) = 2, (f+g)(x-y) = 0 and (f+g)(x) = (f+g)(y) = 1."""
    dep = _dep(seed, i, profile, p["d"])
    rec = Record("remark6.5", i, _dep_text(dep))
    bad = validate_dependent_sequence(dep, profile)
    rec.see(len(bad), 0, not bad)
    worst = Fraction(0)
    for node in dep.nodes:
        for name, value, expected in remark65_identities(node):
            gap = abs(value - expected)
            worst = max(worst, gap)
            rec.see(gap, 0, gap == 0)
    rec.detail = {"weights": list(dep.weights),
                  "identities": [fmt(v) for _, v, _ in remark65_identities(dep.nodes[0])[:3]]}
    if bad:
        rec.note = str(bad[0])
    return [rec]


def suite_lemma66(p, profile, seed, i):
    """max supp y_k / 2^(n_{k+1} - 3) < 1/2^(n_k) on consecutive nodes."""
    dep = _dep(seed, i, profile, p["d"])
    rec = Record("lemma6.6", i, _dep_text(dep))
    for k in range(1, len(dep)):
        a, b = dep.nodes[k - 1], dep.nodes[k]
        lhs = Fraction(a.y.max_supp, 1) / Fraction(2) ** (b.n - 3)
        rhs = Fraction(1, 1 << a.n)
        rec.see(lhs, rhs, lemma66_holds(dep, k))
    rec.detail = {"weights": list(dep.weights)}
    return [rec]


def _coefficients(rng, d):
    m = rng.randint(1, min(4, d))
    ks = sorted(rng.sample(range(1, d + 1), m))
    return {k: Fraction(rng.randint(-6, 6) or 1, rng.randint(1, 5)) for k in ks}


def suite_prop68(p, profile, seed, i):
    """||sum c u_k||_u <= ||sum c z_k|| via clause 5, and the 146 envelope."""
    dep = _dep(seed, i, profile, p["d"])
    text = _dep_text(dep)
    low = Record("prop6.8", i, text, check="prop6.8-lower")
    env = Record("prop6.8", i, text, kind=SAMPLED, check="prop6.8-envelope")
    for t in range(p["coeffs"]):
        rng = instance_rng(seed, f"prop6.8:{i}", t)
        c = _coefficients(rng, len(dep))
        z = dep.combination(c)
        un = u_norm(c)
        value, g = dep.clause5_certificate(c)
        exact = value == un and evaluate(g, z) == un and not validate_functional(
            g, profile, dep.table)
        low.see(un - evaluate(g, z), 0, exact)
        lo, cert = norm_lower(z, profile=profile, hints={"dep": dep, "coeffs": c})
        low.see(un, lo, lo >= un)
        for f in sample_functionals(z, p["samples"], seed, profile, {"dep": dep},
                                    f"prop6.8:{i}:{t}"):
            v = abs(evaluate(f, z))
            env.see(v, 146 * un, v <= 146 * un)
    low.detail = env.detail = {"weights": list(dep.weights), "coefficient_vectors": p["coeffs"]}
    if env.violations:
        env.note = ("desk-scale exact vectors 2^n e_m at the sigma weights exceed the "
                    "constant envelope")
    return [low, env]


def suite_prop75(p, profile, seed, i):
    """S^2 = 0 and (I - S)(I + S) = I on span{x_k, y_k}."""
    dep = _dep(seed, i, profile, p["d"])
    rec = Record("prop7.5", i, _dep_text(dep))
    S, labels = finite_operator_S(dep, range(1, len(dep) + 1))
    m = len(S)
    S2 = mat_mul(S, S)
    nz = sum(1 for row in S2 for v in row if v)
    rec.see(nz, 0, nz == 0)
    I = identity(m)
    P = mat_mul(mat_add(I, S, -1), mat_add(I, S))
    off = sum(1 for a, b in zip(P, I) for u, v in zip(a, b) if u != v)
    rec.see(off, 0, off == 0)
    rec.detail = {"dimension": m, "S2_nonzero": nz}
    return [rec]


def suite_prop79(p, profile, seed, i):
    """Outward-rounded partial sums stay below the closed-form alpha."""
    pairs = [(Fraction(2), Fraction(3)), (Fraction(2), Fraction(5, 2))]
    qp, pp = pairs[i % len(pairs)]
    b = series_alpha_bound(qp, pp, p["J"])
    rec = Record("prop7.9", i, f"{fmt(qp)} {fmt(pp)} {p['J']}")
    rec.see(b.partial_upper, b.alpha_lower, b.holds)
    rec.detail = {"q'": fmt(qp), "p": fmt(pp), "J": p["J"], "alpha_upper": fmt(b.alpha_upper)}
    return [rec]


@dataclass(frozen=True)
class Suite:
    run: object
    defaults: dict
    independent: bool


SUITES = {
    "prop2.4": Suite(suite_prop24, {"count": 100}, True),
    "cor2.6": Suite(suite_cor26, {"count": 8, "samples": 1000}, False),
    "cor3.8": Suite(suite_cor38, {"count": 4, "samples": 200}, False),
    "lemma3.13": Suite(suite_lemma313, {"count": 4, "samples": 100}, False),
    "lemma3.14": Suite(suite_lemma314, {"count": 4, "samples": 100}, False),
    "cor3.12": Suite(suite_cor312, {"count": 4, "samples": 200}, False),
    "prop5.1": Suite(suite_prop51, {"count": 6, "samples": 300}, False),
    "remark6.5": Suite(suite_remark65, {"count": 5, "d": 4}, True),
    "lemma6.6": Suite(suite_lemma66, {"count": 5, "d": 4}, True),
    "prop6.8": Suite(suite_prop68, {"count": 5, "d": 4, "coeffs": 10, "samples": 20}, True),
    "prop7.5": Suite(suite_prop75, {"count": 5, "d": 4}, True),
    "prop7.9": Suite(suite_prop79, {"count": 2, "J": 30}, True),
}


def suite_names():
    return list(SUITES)


def check_suite(name, params=None, profile=None, seed=0, threads=1):
    """Run a named suite (or "all"); returns a SuiteReport, or a list for "all"."""
    if profile is None:
        from ..normingset.profile import make_profile
        profile = make_profile("desk")
    if name == "all":
        return [check_suite(n, params, profile, seed, threads) for n in SUITES]
    suite = SUITES.get(name)
    if suite is None:
        raise DomainError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    p = dict(suite.defaults)
    p.update({k: v for k, v in dict(params or {}).items() if k in p or k == "count"})
    count = int(p["count"])

    def one(i):
        return suite.run(p, profile, seed, i)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(one, range(count)))
    else:
        chunks = [one(i) for i in range(count)]
    return SuiteReport(name, profile, seed, [r for chunk in chunks for r in chunk])
