"""Parameter profiles: the lacunary set L0 = L1 u L2 u L3 and the magnitude
thresholds used by validators and builders.

``strict`` follows the paper: l_1 = 11, l_{k+1} = 2^(2 l_k) + 1, and the
thresholds of the exact-vector definition taken verbatim.  Only the first
three terms of that L0 fit in memory, which is the point: strict mode is
for checking, not for building.

``desk`` keeps every structural rule (orderings, admissibility, sigma
chains, cardinality) but scales the magnitudes so that small witnesses
exist: L0 = 1, 2, 3, ..., the very-fast-growing rule keeps only its
monotone part, and the exact-vector floors and epsilon caps are relaxed.
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..errors import DomainError, ResourceLimitError

MAX_ELL_BITS = 1 << 23


@dataclass(frozen=True)
class ParameterProfile:
    mode: str
    l1: int
    growth: str                 # "paper" | "linear" | "doubling"
    step: int = 1
    vfg_exponential: bool = True
    card_factor: int = 2
    floor_factor: Fraction = Fraction(8)
    eps_factor: Fraction = Fraction(1, 32)
    eps_cap_override: Fraction = None
    sigma_floor_kind: str = "strict"
    block_C: Fraction = Fraction(5)
    lacunarity_window: str = "paper"
    _ells: list = field(default_factory=list, compare=False, repr=False)

    # -- L0 and its partition ---------------------------------------------

    def ell(self, k):
        """l_k, k >= 1."""
        if k < 1:
            raise DomainError("L0 is indexed from 1")
        ells = self._ells
        if not ells:
            ells.append(self.l1)
        while len(ells) < k:
            ells.append(self._next_ell(ells[-1]))
        return ells[k - 1]

    def _next_ell(self, prev):
        if self.growth == "paper":
            if 2 * prev > MAX_ELL_BITS:
                raise ResourceLimitError(
                    f"next L0 term has about {2 * prev} bits, above the {MAX_ELL_BITS}-bit limit",
                    required=2 * prev)
            return (1 << (2 * prev)) + 1
        if self.growth == "doubling":
            return 2 * prev + 1
        return prev + self.step

    def part(self, k):
        """Which of L1, L2, L3 holds l_k."""
        return (k - 1) % 3 + 1

    def index_of(self, n):
        """k with l_k = n, or None."""
        if n < self.l1:
            return None
        if self.growth == "linear":
            q, r = divmod(n - self.l1, self.step)
            return q + 1 if r == 0 else None
        k = 1
        while True:
            v = self.ell(k)
            if v == n:
                return k
            if v > n:
                return None
            # stop before materializing a term far beyond n
            if self.growth == "paper" and 2 * v >= n.bit_length():
                return None
            k += 1

    def in_L(self, n, which):
        k = self.index_of(n)
        return k is not None and self.part(k) == which

    def elements(self, which, above=0):
        """Lazy increasing enumeration of L_which above ``above``."""
        k = which
        if self.growth == "linear" and above >= self.l1:
            k = (above - self.l1) // self.step + 1
            k += (which - self.part(k)) % 3
        while True:
            v = self.ell(k)
            if v > above:
                yield v
            k += 3

    # -- thresholds -------------------------------------------------------

    def vfg_ok(self, size, prev_size, prev_max_supp):
        """Very fast growing step: size > 2^(max supp prev), size > prev size."""
        if size <= prev_size:
            return False
        if self.vfg_exponential:
            return size > (1 << prev_max_supp)
        return True

    def vfg_floor_text(self, prev_max_supp):
        return f"2^{prev_max_supp}" if self.vfg_exponential else "previous size"

    def support_floor(self, C, n):
        """Lower bound on min supp for a (C, theta, n) vector."""
        return self.floor_factor * to_frac(C) * 4 ** n

    def eps_cap(self, C, n):
        """epsilon must stay strictly below this."""
        if self.eps_cap_override is not None:
            return self.eps_cap_override
        return self.eps_factor / (to_frac(C) * 8 ** n)

    def sigma_floor(self, last):
        """Growth floor G(t) for a prefix whose last functional has vector ``last``."""
        m = last.max_supp
        if self.sigma_floor_kind == "strict":
            den = max(v.denominator for _, v in last.items())
            return 1 << (m * (1 + den))
        return 2 * m

    def is_paper_regime(self):
        return self.mode == "strict"

    # -- invariants -------------------------------------------------------

    def lacunarity_violations(self, count=8):
        """Check Remark 1.2 on the first ``count`` terms of L0 that fit."""
        terms = []
        for k in range(1, count + 1):
            try:
                terms.append((self.ell(k), self.part(k)))
            except ResourceLimitError:
                break
        L = [v for v, p in terms if p in (1, 2)]
        out = []
        for v, p in terms:
            hi = self.window_end(v)
            inside = [w for w in L if v <= w <= hi]
            if len(inside) > 1:
                out.append(f"#L in {self._window_text(v)} = {len(inside)} > 1")
            if p == 3 and inside:
                out.append(f"L meets {self._window_text(v)} although l_k is in L3")
        return out

    def window_end(self, n):
        if self.lacunarity_window == "paper":
            return 1 << (2 * n) if 2 * n <= MAX_ELL_BITS else float("inf")
        return n

    def _window_text(self, n):
        if n.bit_length() > 64:
            return f"window of an l_k with {n.bit_length()} bits"
        hi = f"2^{2 * n}" if self.lacunarity_window == "paper" else str(n)
        return f"[{n}, {hi}]"

    def tail_bound(self):
        """Upper bound for sum 2^(-l_k) (paper growth only)."""
        # l_2 > 2^(2 l_1) > 2 l_1 + 1 and terms at least halve after that
        return Fraction(1, 1 << self.l1) + Fraction(1, 1 << (2 * self.l1))

    def describe(self):
        return {
            "mode": self.mode,
            "l1": self.l1,
            "growth": self.growth,
            "vfg": "exponential" if self.vfg_exponential else "monotone",
            "card_factor": self.card_factor,
            "sigma_floor": self.sigma_floor_kind,
            "block_C": str(self.block_C),
        }


def to_frac(v):
    return v if isinstance(v, Fraction) else Fraction(v)


STRICT_DEFAULTS = dict(l1=11, growth="paper", vfg_exponential=True,
                       sigma_floor_kind="strict", lacunarity_window="paper")
DESK_DEFAULTS = dict(l1=1, growth="linear", step=1, vfg_exponential=False,
                     floor_factor=Fraction(0), eps_cap_override=Fraction(2),
                     sigma_floor_kind="desk", lacunarity_window="point")

_KNOWN = {"l1", "growth", "step", "vfg_exponential", "card_factor", "floor_factor",
          "eps_factor", "eps_cap_override", "sigma_floor_kind", "block_C",
          "lacunarity_window"}


def make_profile(mode="desk", overrides=None):
    """Build a profile; overrides that break the mode's invariants are rejected."""
    if mode not in ("strict", "desk"):
        raise DomainError(f"unknown profile mode {mode!r}")
    params = dict(STRICT_DEFAULTS if mode == "strict" else DESK_DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in _KNOWN:
            raise DomainError(f"unknown profile parameter {key!r}")
        params[key] = value
    for key in ("floor_factor", "eps_factor", "block_C"):
        if key in params:
            params[key] = to_frac(params[key])
    if params.get("eps_cap_override") is not None:
        params["eps_cap_override"] = to_frac(params["eps_cap_override"])
    prof = ParameterProfile(mode=mode, **params)
    _check(prof)
    return prof


def _check(p):
    if p.l1 < 1:
        raise DomainError("L0 must consist of positive integers")
    if p.growth not in ("paper", "linear", "doubling"):
        raise DomainError(f"unknown L0 growth rule {p.growth!r}")
    if p.step < 1:
        raise DomainError("L0 must be strictly increasing")
    if p.card_factor < 1:
        raise DomainError("cardinality factor must be positive")
    if p.mode == "strict":
        if p.l1 <= 9:
            raise DomainError(f"strict profile needs l_1 > 9 (got l_1 = {p.l1})")
        if p.growth != "paper":
            raise DomainError("strict profile needs l_(k+1) > 2^(2 l_k)")
        if not p.vfg_exponential:
            raise DomainError("strict profile keeps the 2^(max supp) growth rule")
        if p.card_factor != 2:
            raise DomainError("strict profile keeps the rule 2(#F) <= min supp")
        if p.sigma_floor_kind != "strict" or p.eps_cap_override is not None:
            raise DomainError("strict profile keeps the paper's magnitude thresholds")
        if p.tail_bound() >= Fraction(1, 1000):
            raise DomainError("strict profile needs sum 2^(-l_k) < 1/1000")
    bad = p.lacunarity_violations()
    if bad:
        raise DomainError("lacunarity fails: " + "; ".join(bad))


def with_overrides(profile, **kw):
    """A copy of ``profile`` with some fields replaced (re-checked)."""
    p = replace(profile, _ells=[], **kw)
    _check(p)
    return p
