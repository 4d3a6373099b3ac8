"""Certificates behind norm bounds, and the interval that pairs them.

A lower certificate is a functional of W together with the coding table it
was validated against; replaying it re-validates and re-evaluates.  An
upper certificate is a derivation record: the rule's name and the inputs
it was computed from, so the rule can be re-run on the same inputs.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import IntegrityError
from ..normingset.functionals import evaluate
from ..normingset.validate import validate_functional
from ..vectors import FinVec, fmt, short

KINDS = ("functional-witness", "tsirelson-domination", "lemma-bound", "exhaustion")


@dataclass(frozen=True)
class Certificate:
    kind: str
    value: Fraction
    payload: object = field(compare=False)
    name: str = ""
    depth: int = 0
    table: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def label(self):
        if self.kind == "lemma-bound":
            return f"lemma-bound({self.name})"
        if self.kind == "exhaustion":
            return f"exhaustion({self.depth})"
        if self.kind == "tsirelson-domination" and self.name:
            return f"tsirelson-domination({self.name})"
        return self.kind

    def summary(self):
        text = f"{self.label} = {fmt(self.value)}"
        if self.kind == "functional-witness":
            kind = self.payload.kind
            text += f" via {'unit' if kind == '0' else kind} functional"
        return text

    def replay(self, x, profile):
        """Recompute the bound; IntegrityError when it does not match."""
        if self.kind == "functional-witness":
            bad = validate_functional(self.payload, profile, self.table)
            if bad:
                raise IntegrityError(f"witness functional left W: {bad[0]}")
            got = evaluate(self.payload, x)
        else:
            from .bounds import RULES
            rule = RULES.get(self.name)
            if rule is None:
                raise IntegrityError(f"no derivation rule named {self.name!r}")
            got = rule(x, self.payload, profile)
        if got != self.value:
            raise IntegrityError(
                f"{self.label} replays to {fmt(got)}, certificate claims {fmt(self.value)}")
        return got


@dataclass(frozen=True)
class NormInterval:
    x: FinVec
    lower: Fraction
    lower_cert: Certificate
    upper: Fraction
    upper_cert: Certificate
    others: tuple = field(default=(), compare=False)   # every other applicable upper bound

    @property
    def exact(self):
        return self.lower == self.upper

    def __contains__(self, value):
        return self.lower <= value <= self.upper

    def text(self):
        return f"[{short(self.lower)}, {short(self.upper)}]"

    def summary(self):
        lines = [f"interval {self.text()}",
                 f"lower {self.lower_cert.summary()}",
                 f"upper {self.upper_cert.summary()}"]
        lines += [f"also  {c.summary()}" for c in self.others]
        return "\n".join(lines)
