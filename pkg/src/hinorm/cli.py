"""Command-line interface.

Exit codes: 0 success, 1 violation in a profile-independent suite (or an
invalid witness), 2 usage error, 3 profile infeasibility.
"""
import argparse
import sys
from dataclasses import dataclass, field, fields

from .errors import DomainError, HinormError, IntegrityError, ResourceLimitError
from .schreier import convolution_equals, enumerate_schreier, is_admissible, is_schreier
from .vectors import FinVec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- run configuration ------------------------------------------------------

@dataclass
class RunConfig:
    """Flat key = value settings; ``profile.<name>`` keys are profile overrides."""
    profile: str = "desk"
    overrides: dict = field(default_factory=dict)
    budget: int = None
    seed: int = 0
    threads: int = 1
    count: int = None
    table: str = None
    out: str = None

    _INTS = ("budget", "seed", "threads", "count")

    def dumps(self):
        lines = ["# hinorm config v1"]
        for f in fields(self):
            if f.name == "overrides":
                continue
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name} = {v}")
        lines += [f"profile.{k} = {v}" for k, v in sorted(self.overrides.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        cfg = cls()
        names = {f.name for f in fields(cls)} - {"overrides"}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not sep:
                raise UsageError(f"config line {lineno}: expected key = value")
            if key.startswith("profile."):
                cfg.overrides[key[len("profile."):]] = _override_value(val)
            elif key in names:
                setattr(cfg, key, int(val) if key in cls._INTS else val)
            else:
                raise UsageError(f"config line {lineno}: unknown key {key!r}")
        return cfg

    def merged(self, args):
        """Copy with every flag the user actually gave taking precedence."""
        out = RunConfig(**{f.name: getattr(self, f.name) for f in fields(self)})
        out.overrides = dict(self.overrides)
        for f in fields(self):
            v = getattr(args, f.name, None)
            if v is not None and f.name != "overrides":
                setattr(out, f.name, v)
        for item in getattr(args, "set", None) or ():
            key, sep, val = item.partition("=")
            if not sep:
                raise UsageError(f"--set expects name=value, got {item!r}")
            out.overrides[key.strip()] = _override_value(val.strip())
        return out

    def make_profile(self):
        from .normingset.profile import make_profile
        return make_profile(self.profile, self.overrides)

    def make_table(self, profile):
        if not self.table:
            return None
        from .normingset.coding import CodingTable
        return CodingTable(profile, self.table)


def _override_value(val):
    low = val.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(val)
    except ValueError:
        pass
    if "/" in val:
        from fractions import Fraction
        try:
            return Fraction(val)
        except ValueError:
            pass
    return val


# -- argument helpers -------------------------------------------------------

def _int_set(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed set literal {text!r}; expected e.g. 2,3,4") from None


def _ground(text):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"malformed ground interval {text!r}; expected e.g. 1..12") from None


def _coeffs(text):
    from fractions import Fraction
    out = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        k, sep, v = item.partition(":")
        try:
            if not sep:
                raise ValueError
            out[int(k)] = Fraction(v)
        except ValueError:
            raise UsageError(f"malformed coefficient {item!r}; expected k:num/den") from None
    return out


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if not path or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands ---------------------------------------------------------------

def cmd_schreier(args, cfg):
    if args.action == "member":
        print("true" if is_schreier(_int_set(args.set), args.level) else "false")
    elif args.action == "admissible":
        print("true" if is_admissible(_int_set(args.minsupps), args.level) else "false")
    elif args.action == "enumerate":
        for F in sorted(enumerate_schreier(args.level, _ground(args.ground)),
                        key=lambda s: (len(s), sorted(s))):
            print("{" + ",".join(str(k) for k in sorted(F)) + "}")
    else:
        same = convolution_equals(args.n, args.m, _ground(args.ground))
        print("equal" if same else "different")
    return EXIT_OK


_BUILD_FLAGS = ("n", "eps", "from_", "blocks", "count", "C", "n1", "eta", "d")


def cmd_build(args, cfg):
    from .witness import build_witness
    profile = cfg.make_profile()
    params = {}
    for name in _BUILD_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            params[name.rstrip("_")] = v
    w = build_witness(args.kind, params, profile, cfg.make_table(profile))
    if cfg.out:
        _write(cfg.out, w.dumps())
    print(w.summary())
    return EXIT_OK if not w.violations() else EXIT_VIOLATION


def cmd_validate(args, cfg):
    from .witness import load_witness
    # the file records the profile mode only; overrides come from the config or flags
    profile = cfg.make_profile() if cfg.overrides else None
    w = load_witness(_read(args.witness), profile,
                     cfg.make_table(profile or cfg.make_profile()) if cfg.table else None)
    print(w.summary())
    return EXIT_OK if not w.violations() else EXIT_VIOLATION


def cmd_norm(args, cfg):
    from .engine import Budget, norm_interval
    from .witness import load_witness
    try:
        x = FinVec.loads(_read(args.vector))
    except DomainError as exc:
        raise UsageError(f"unreadable vector file {args.vector}: {exc}") from None
    profile = cfg.make_profile()
    hints = {}
    if args.hint:
        w = load_witness(_read(args.hint))
        if w.profile.mode != profile.mode:
            raise UsageError(f"hint was built under the {w.profile.mode} profile")
        profile = w.profile
        hints = w.hints(_coeffs(args.coeffs))
    budget = Budget.of(cfg.budget) if cfg.budget is not None else Budget()
    iv = norm_interval(x, budget, hints, profile, cfg.threads)
    print(iv.summary())
    return EXIT_OK


def cmd_suite(args, cfg):
    from .engine.suites import SUITES, check_suite
    if args.action == "list":
        for name, s in SUITES.items():
            print(f"{name}\t{'independent' if s.independent else 'sampled'}")
        return EXIT_OK
    if args.name != "all" and args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; known: {', '.join(SUITES)}, all")
    params = {}
    if cfg.count is not None:
        params["count"] = cfg.count
    for key in ("samples",):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    res = check_suite(args.name, params, cfg.make_profile(), cfg.seed, cfg.threads)
    reports = res if isinstance(res, list) else [res]
    _write(cfg.out, "".join(r.to_jsonl() for r in reports))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    bad = sum(r.independent_violations for r in reports)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_config(args, cfg):
    sys.stdout.write(cfg.dumps())
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--profile", choices=("desk", "strict"))
    p.add_argument("--set", action="append", metavar="NAME=VALUE",
                   help="profile override, e.g. --set card_factor=2")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--table", help="coding-table log file")
    p.add_argument("--out", help="output file (default stdout)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    ap = _Parser(prog="hinorm", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("schreier", help="Schreier family queries")
    ssub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ssub.add_parser("member")
    p.add_argument("--set", required=True)
    p.add_argument("--level", type=int, required=True)
    p = ssub.add_parser("admissible")
    p.add_argument("--minsupps", required=True)
    p.add_argument("--level", type=int, required=True)
    p = ssub.add_parser("enumerate")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--ground", required=True)
    p = ssub.add_parser("convolution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ground", required=True)
    sp.set_defaults(func=cmd_schreier)

    bp = sub.add_parser("build", help="build a witness")
    bp.add_argument("kind", choices=("scc", "ris", "exact-vector", "exact-pair", "dependent"))
    bp.add_argument("--n", type=int)
    bp.add_argument("--eps")
    bp.add_argument("--from", dest="from_", type=int)
    bp.add_argument("--blocks", help="unit or random:KEY")
    bp.add_argument("--count", type=int)
    bp.add_argument("--C")
    bp.add_argument("--n1", type=int)
    bp.add_argument("--eta")
    bp.add_argument("--d", type=int)
    _common(bp)
    bp.set_defaults(func=cmd_build)

    vp = sub.add_parser("validate", help="rebuild and validate a witness file")
    vp.add_argument("witness")
    _common(vp)
    vp.set_defaults(func=cmd_validate)

    np_ = sub.add_parser("norm", help="certified norm interval of a vector")
    np_.add_argument("vector", help="FinVec file, or - for stdin")
    np_.add_argument("--hint", help="witness file describing the vector")
    np_.add_argument("--coeffs", help="node coefficients k:c,... for a dependent hint")
    _common(np_)
    np_.set_defaults(func=cmd_norm)

    up = sub.add_parser("suite", help="inequality suites")
    usub = up.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = usub.add_parser("run")
    p.add_argument("name")
    p.add_argument("--count", type=int)
    p.add_argument("--samples", type=int)
    _common(p)
    usub.add_parser("list")
    up.set_defaults(func=cmd_suite)

    cp = sub.add_parser("config", help="print the effective configuration")
    _common(cp)
    cp.set_defaults(func=cmd_config)
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig()
        if getattr(args, "config", None):
            cfg = RunConfig.loads(_read(args.config))
        if args.command != "schreier":
            cfg = cfg.merged(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"hinorm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"hinorm: infeasible under this profile: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except IntegrityError as exc:
        print(f"hinorm: integrity failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (DomainError, HinormError, ValueError) as exc:
        print(f"hinorm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
