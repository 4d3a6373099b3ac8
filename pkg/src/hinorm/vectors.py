"""Finitely supported vectors with exact rational coefficients."""
from fractions import Fraction

from .errors import DomainError

FINVEC_HEADER = "# finvec v1"


def to_fraction(value):
    """Parse ``value`` (int, Fraction or a ``num/den`` string) exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def fmt(q):
    """``num/den`` text of a rational, denominator always written."""
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def short(q):
    """Like :func:`fmt` but integers are written bare; for human-facing summaries."""
    q = to_fraction(q)
    return str(q.numerator) if q.denominator == 1 else fmt(q)


class FinVec:
    """Immutable sparse vector in c_00 indexed from 1.

    Zero coefficients are never stored.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, entries=None):
        items = {}
        if entries:
            pairs = entries.items() if hasattr(entries, "items") else entries
            for k, v in pairs:
                k = int(k)
                if k < 1:
                    raise DomainError(f"index {k} < 1")
                v = to_fraction(v)
                if v:
                    items[k] = items.get(k, 0) + v
        self._items = tuple(sorted((k, v) for k, v in items.items() if v))
        self._hash = None

    @classmethod
    def unit(cls, k, coeff=1):
        return cls({k: coeff})

    @classmethod
    def ones(cls, indices, coeff=1):
        return cls({k: coeff for k in indices})

    def items(self):
        return self._items

    def __getitem__(self, k):
        for i, v in self._items:
            if i == k:
                return v
        return Fraction(0)

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __bool__(self):
        return bool(self._items)

    def __eq__(self, other):
        return isinstance(other, FinVec) and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}: {fmt(v)}" for k, v in self._items)
        return f"FinVec({{{body}}})"

    @property
    def support(self):
        return tuple(k for k, _ in self._items)

    @property
    def min_supp(self):
        if not self._items:
            raise DomainError("empty vector has no support")
        return self._items[0][0]

    @property
    def max_supp(self):
        if not self._items:
            raise DomainError("empty vector has no support")
        return self._items[-1][0]

    @property
    def range(self):
        """The interval [min supp, max supp] or None for the zero vector."""
        if not self._items:
            return None
        return (self._items[0][0], self._items[-1][0])

    def __add__(self, other):
        d = dict(self._items)
        for k, v in other._items:
            d[k] = d.get(k, 0) + v
        return FinVec(d)

    def __neg__(self):
        return FinVec({k: -v for k, v in self._items})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        a = to_fraction(a)
        return FinVec({k: a * v for k, v in self._items})

    __rmul__ = scale

    def restrict(self, interval):
        """E x for an interval E = (lo, hi); None bounds are open."""
        lo, hi = interval
        return FinVec({k: v for k, v in self._items
                       if (lo is None or k >= lo) and (hi is None or k <= hi)})

    def dot(self, other):
        """Pairing with another finitely supported vector."""
        a, b = dict(self._items), other._items
        return sum((v * a[k] for k, v in b if k in a), Fraction(0))

    def sup_norm(self):
        return max((abs(v) for _, v in self._items), default=Fraction(0))

    def l1_norm(self):
        return sum((abs(v) for _, v in self._items), Fraction(0))

    def abs(self):
        return FinVec({k: abs(v) for k, v in self._items})

    # -- text format -------------------------------------------------------

    def dumps(self):
        lines = [FINVEC_HEADER]
        lines += [f"{k}:{fmt(v)}" for k, v in self._items]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        entries = {}
        last = 0
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            idx, _, val = line.partition(":")
            if not _:
                raise DomainError(f"bad finvec line: {raw!r}")
            k = int(idx)
            if k <= last:
                raise DomainError(f"finvec indices not increasing at {k}")
            last = k
            entries[k] = to_fraction(val)
        return cls(entries)


def lin_comb(coeffs, vecs):
    """sum_k c_k x_k as a FinVec."""
    d = {}
    for c, x in zip(coeffs, vecs):
        c = to_fraction(c)
        for k, v in x.items():
            d[k] = d.get(k, 0) + c * v
    return FinVec(d)


def is_successive(vecs):
    """x_1 < x_2 < ...: max supp of each below min supp of the next."""
    prev = 0
    for x in vecs:
        if not x:
            return False
        if x.min_supp <= prev:
            return False
        prev = x.max_supp
    return True
