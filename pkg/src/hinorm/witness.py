"""Witness files: a recipe, the built objects in readable form, and a loader.

A witness file starts with a version line, lists ``key: value`` lines (the
kind, the profile and the recipe parameters) and then ``== name`` sections
holding vectors in FinVec text and functionals as s-expressions::

    # hinorm witness v1
    kind: exact-pair
    profile: desk
    recipe.n: 1
    == x
    9:1/1
    == f
    (I-alpha 1 + ...)

Builders are deterministic, so loading re-runs the recipe and checks that
every stored section is reproduced bit for bit.  That gives back the full
witness objects (s.c.c. data, certificates, coding-table state) without a
second parser per object type.
"""
from dataclasses import dataclass, field
from itertools import count

from .constructions import (build_dependent_sequence, build_exact_pair, build_exact_vector,
                            build_ris, remark65_identities, unit_blocks,
                            validate_dependent_sequence, validate_exact_pair,
                            validate_exact_vector, validate_ris)
from .errors import DomainError, IntegrityError
from .normingset.functionals import dumps as dump_functional
from .normingset.profile import make_profile
from .scc import make_basic_scc, make_scc, validate_scc
from .vectors import FinVec, fmt, short, to_fraction

HEADER = "# hinorm witness v1"
KINDS = ("scc", "ris", "exact-vector", "exact-pair", "dependent")

# recipe parameters per kind, with defaults (None: chosen by the builder)
DEFAULTS = {
    "scc": {"n": 1, "eps": "1/8", "from": 10, "blocks": "unit", "count": 256},
    "ris": {"C": 2, "count": 4, "n1": 1, "from": 1, "blocks": "unit"},
    "exact-vector": {"C": 1, "n": 1, "eps": None, "from": None, "blocks": "unit", "count": 256},
    "exact-pair": {"n": None, "eta": "1/72", "from": 0, "blocks": "unit"},
    "dependent": {"d": 2, "eta": "1/72", "blocks": "unit"},
}


def block_source(spec):
    """``unit`` or ``random:KEY`` (sup-norm one blocks with one or two coordinates)."""
    if spec == "unit":
        return unit_blocks
    kind, _, key = str(spec).partition(":")
    if kind == "random" and key:
        from .engine.suites import random_blocks
        return random_blocks(key)
    raise DomainError(f"unknown block source {spec!r}; use 'unit' or 'random:KEY'")


def _take(source, after, k):
    it = source(after)
    return [next(it) for _ in range(k)]


def _profile_text(profile):
    return profile.mode


@dataclass
class Witness:
    kind: str
    params: dict
    profile: object
    obj: object
    table: object = None
    sections: dict = field(default_factory=dict)

    def vector(self):
        """The main vector: x for vectors and pairs, None for sequences."""
        o = self.obj
        if self.kind == "scc":
            return o.vector
        if self.kind in ("exact-vector", "exact-pair"):
            return o.x
        return None

    def hints(self, coeffs=None):
        if self.kind == "scc":
            return {"scc": self.obj}
        if self.kind == "exact-vector":
            return {"exact_vector": self.obj}
        if self.kind == "exact-pair":
            return {"pair": self.obj}
        if self.kind == "dependent":
            h = {"dep": self.obj}
            if coeffs:
                h["coeffs"] = coeffs
            return h
        if self.kind == "ris":
            return {}
        raise DomainError(self.kind)

    def violations(self):
        o, p = self.obj, self.profile
        if self.kind == "scc":
            return validate_scc(o)
        if self.kind == "ris":
            return validate_ris(o, p)
        if self.kind == "exact-vector":
            return validate_exact_vector(o, p)
        if self.kind == "exact-pair":
            return validate_exact_pair(o, p)
        return validate_dependent_sequence(o, p)

    def summary(self):
        o = self.obj
        lines = [f"kind {self.kind}", f"profile {self.profile.mode}"]
        if self.kind == "scc":
            lines += [f"n {o.n}", f"eps {fmt(o.epsilon)}", f"support {len(o.psi)}",
                      f"psi {o.psi[0]}..{o.psi[-1]}"]
        elif self.kind == "ris":
            lines += [f"C {fmt(o.C)}", f"n_k {' '.join(str(n) for n in o.nks)}",
                      "norm bounds " + " ".join(fmt(b) for b in o.norm_bounds)]
        elif self.kind == "exact-vector":
            lines += [f"n {o.n}", f"C {fmt(o.C)}", f"eps {fmt(o.epsilon)}",
                      f"lower {fmt(o.theta)}", f"upper {fmt(o.upper)}",
                      f"support {o.x.min_supp}..{o.x.max_supp}"]
        elif self.kind == "exact-pair":
            lines += [f"weight {o.n}", f"f(x') {fmt(o.vector.theta)}",
                      f"f(x) {fmt(o.value())}",
                      f"support {o.x.min_supp}..{o.x.max_supp}"]
        else:
            lines.append("weights " + " ".join(str(w) for w in o.weights))
            for k, nd in enumerate(o.nodes, 1):
                vals = [short(v) for _, v, _ in remark65_identities(nd)[:3]]
                lines.append(f"node {k} identities {' '.join(vals)}")
        bad = self.violations()
        lines.append("valid" if not bad else f"violations {len(bad)}: {bad[0]}")
        return "\n".join(lines)

    def dumps(self):
        out = [HEADER, f"kind: {self.kind}", f"profile: {_profile_text(self.profile)}"]
        out += [f"recipe.{k}: {v}" for k, v in sorted(self.params.items()) if v is not None]
        for name, text in self.sections.items():
            out.append(f"== {name}")
            out.append(text.rstrip("\n"))
        return "\n".join(out) + "\n"


def _sections(kind, obj):
    s = {}
    if kind == "scc":
        s["scc"] = obj.sexpr()
        s["x"] = obj.vector.dumps()
    elif kind == "ris":
        for k, b in enumerate(obj.blocks, 1):
            s[f"x{k}"] = b.dumps()
    elif kind == "exact-vector":
        s["x"] = obj.x.dumps()
        s["scc"] = obj.scc.sexpr()
        s["certificate"] = dump_functional(obj.certificate)
    elif kind == "exact-pair":
        s["x"] = obj.x.dumps()
        s["f"] = dump_functional(obj.f)
    else:
        for k, nd in enumerate(obj.nodes, 1):
            s[f"x{k}"] = nd.x.dumps()
            s[f"f{k}"] = dump_functional(nd.f)
            s[f"y{k}"] = nd.y.dumps()
            s[f"g{k}"] = dump_functional(nd.g)
    return s


def _int(v):
    return None if v is None else int(v)


def _frac(v):
    return None if v is None else to_fraction(v)


def build_witness(kind, params=None, profile=None, table=None):
    """Run the builder for ``kind`` with recipe ``params`` (merged over defaults)."""
    if kind not in KINDS:
        raise DomainError(f"unknown witness kind {kind!r}; known: {', '.join(KINDS)}")
    profile = profile or make_profile("desk")
    p = dict(DEFAULTS[kind])
    for k, v in (params or {}).items():
        if k not in p:
            raise DomainError(f"{kind} takes no parameter {k!r}")
        p[k] = v
    src = block_source(p["blocks"])
    if kind == "scc":
        n, eps, start = int(p["n"]), to_fraction(p["eps"]), int(p["from"])
        if p["blocks"] == "unit":
            obj = make_basic_scc(count(start), n, eps)
        else:
            obj = make_scc(_take(src, start - 1, int(p["count"])), n, eps)
    elif kind == "ris":
        start = int(p["from"])
        obj = build_ris(lambda a: src(max(a, start - 1)), to_fraction(p["C"]), int(p["count"]),
                        profile, n1=int(p["n1"]))
    elif kind == "exact-vector":
        C, n = to_fraction(p["C"]), int(p["n"])
        start = _int(p["from"])
        if start is None:
            start = max(1, int(profile.support_floor(C, n)) + 1)
            p["from"] = start
        obj = build_exact_vector(_take(src, start - 1, int(p["count"])), C, n, profile,
                                 epsilon=_frac(p["eps"]))
    elif kind == "exact-pair":
        n = _int(p["n"])
        if n is None:
            n = next(profile.elements(1))
            p["n"] = n
        obj = build_exact_pair(src, n, to_fraction(p["eta"]), profile, after=int(p["from"]))
    else:
        if p["blocks"] == "unit":
            xs = ys = src
        else:
            key = str(p["blocks"]).partition(":")[2]
            xs, ys = block_source(f"random:{key}:x"), block_source(f"random:{key}:y")
        obj = build_dependent_sequence(xs, ys, int(p["d"]), profile, table=table,
                                       eta=to_fraction(p["eta"]))
        table = obj.table
    return Witness(kind, p, profile, obj, table, _sections(kind, obj))


def parse_witness(text):
    """(kind, profile mode, recipe params, sections) from witness text."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise DomainError(f"not a witness file (first line must be {HEADER!r})")
    head, sections, current = {}, {}, None
    for raw in lines[1:]:
        if raw.startswith("== "):
            current = raw[3:].strip()
            sections[current] = []
        elif current is not None:
            sections[current].append(raw)
        elif raw.strip():
            key, sep, val = raw.partition(":")
            if not sep:
                raise DomainError(f"bad witness line {raw!r}")
            head[key.strip()] = val.strip()
    kind = head.pop("kind", None)
    mode = head.pop("profile", "desk")
    params = {k[len("recipe."):]: v for k, v in head.items() if k.startswith("recipe.")}
    return kind, mode, params, {k: "\n".join(v) + "\n" for k, v in sections.items()}


def load_witness(text, profile=None, table=None):
    """Rebuild a witness from its recipe; IntegrityError if any section differs."""
    kind, mode, params, stored = parse_witness(text)
    if profile is None:
        profile = make_profile(mode)
    elif profile.mode != mode:
        raise DomainError(f"witness was built under the {mode} profile, not {profile.mode}")
    w = build_witness(kind, params, profile, table)
    for name, body in stored.items():
        got = w.sections.get(name)
        if got is None or got.rstrip("\n") != body.rstrip("\n"):
            raise IntegrityError(f"witness section {name!r} is not reproduced by its recipe")
    if set(w.sections) != set(stored):
        raise IntegrityError("witness file is missing sections")
    return w


def load_vector(text):
    return FinVec.loads(text)
