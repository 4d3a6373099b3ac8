"""Functionals of the norming set W as immutable, hash-consed trees.

Every node caches its dense vector, so evaluation is a dot product.  Two
structurally equal trees are the same object: children are interned first,
so a node's identity key only needs the identities of its children.

Text form (one s-expression per functional)::

    f      := (unit SIGN INDEX) | (zero)
            | (alpha SIZE f*) | (beta SIZE f*)
            | (I-alpha WEIGHT SIGN WIN f*) | (I-beta WEIGHT SIGN WIN f*)
            | (II+ SIGN WIN (F q*) SEQ)
            | (II- SIGN WIN (F q*) (lambda RAT*) SEQ)
            | (convex (RAT f)*)
    SEQ    := (seq (pair f f)*)
    WIN    := (win LO HI)          LO, HI integers or * (open)
    SIGN   := + | -
    RAT    := num/den
"""
import threading
from fractions import Fraction

from ..errors import DomainError
from ..vectors import FinVec, fmt, lin_comb, to_fraction

OPEN = (None, None)
_STORE = {}
_LOCK = threading.Lock()


def _window(E):
    if E is None:
        return OPEN
    lo, hi = E
    return (None if lo is None else int(lo), None if hi is None else int(hi))


def _meet(E, F):
    lo = E[0] if F[0] is None else F[0] if E[0] is None else max(E[0], F[0])
    hi = E[1] if F[1] is None else F[1] if E[1] is None else min(E[1], F[1])
    return lo, hi


def _empty(E):
    return E[0] is not None and E[1] is not None and E[0] > E[1]


def _hits(rng, E):
    """Does the interval ``rng`` meet the window E?"""
    if rng is None or _empty(E):
        return False
    lo, hi = rng
    return (E[0] is None or hi >= E[0]) and (E[1] is None or lo <= E[1])


def _sign(s):
    if s in (1, "+"):
        return 1
    if s in (-1, "-"):
        return -1
    raise DomainError(f"sign must be +1 or -1, got {s!r}")


class Node:
    """Base class: interned on construction, compared by identity."""

    __slots__ = ("_key", "_vec", "_dense", "__weakref__")
    kind = "node"

    @classmethod
    def _intern(cls, fields):
        # children are already interned, so identity hashing of fields suffices
        ident = (cls, fields)
        with _LOCK:
            node = _STORE.get(ident)
            if node is None:
                node = object.__new__(cls)
                object.__setattr__(node, "_key", fields)
                object.__setattr__(node, "_vec", None)
                object.__setattr__(node, "_dense", None)
                _STORE[ident] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("functionals are immutable")

    def __reduce__(self):
        return (loads, (dumps(self),))

    @property
    def vec(self):
        if self._vec is None:
            object.__setattr__(self, "_vec", self._compute())
        return self._vec

    def _compute(self):
        raise NotImplementedError

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        text = dumps(self)
        return text if len(text) < 120 else text[:117] + "..."

    is_type_I = False
    is_type_II = False


class Zero(Node):
    __slots__ = ()
    kind = "zero"

    def __new__(cls):
        return cls._intern(())

    def _compute(self):
        return FinVec()


class Unit(Node):
    """sign * e_index^*  (type 0)."""
    __slots__ = ()
    kind = "0"

    def __new__(cls, sign, index):
        index = int(index)
        if index < 1:
            raise DomainError(f"unit index {index} < 1")
        return cls._intern((_sign(sign), index))

    sign = property(lambda self: self._key[0])
    index = property(lambda self: self._key[1])

    def _compute(self):
        return FinVec.unit(self.index, self.sign)


class _Average(Node):
    __slots__ = ()

    def __new__(cls, size, summands):
        size = int(size)
        if size < 1:
            raise DomainError("average size must be positive")
        return cls._intern((size, tuple(summands)))

    size = property(lambda self: self._key[0])
    summands = property(lambda self: self._key[1])

    def _compute(self):
        return lin_comb([Fraction(1, self.size)] * len(self.summands),
                        [g.vec for g in self.summands])


class AlphaAvg(_Average):
    """(1/s) sum of at most s successive functionals."""
    __slots__ = ()
    kind = "alpha"


class BetaAvg(_Average):
    """(1/s) sum of at most s type II functionals with disjoint weight sets."""
    __slots__ = ()
    kind = "beta"


class _TypeI(Node):
    __slots__ = ()
    is_type_I = True

    def __new__(cls, weight, averages, sign=1, window=None):
        weight = int(weight)
        return cls._intern((weight, tuple(averages), _sign(sign), _window(window)))

    weight = property(lambda self: self._key[0])
    averages = property(lambda self: self._key[1])
    sign = property(lambda self: self._key[2])
    window = property(lambda self: self._key[3])

    def _compute(self):
        raw = lin_comb([Fraction(self.sign, 1 << self.weight)] * len(self.averages),
                       [a.vec for a in self.averages])
        return raw.restrict(self.window)


class TypeIAlpha(_TypeI):
    """E (+-)(1/2^n) sum of S_n-admissible very fast growing alpha-averages."""
    __slots__ = ()
    kind = "I-alpha"


class TypeIBeta(_TypeI):
    __slots__ = ()
    kind = "I-beta"


class SpecialSequence(Node):
    """Interlaced pairs (f_q, g_q) of type I-alpha functionals."""
    __slots__ = ()
    kind = "seq"

    def __new__(cls, pairs):
        pairs = tuple((f, g) for f, g in pairs)
        return cls._intern((pairs,))

    pairs = property(lambda self: self._key[0])

    def __len__(self):
        return len(self.pairs)

    @property
    def weights(self):
        return tuple(f.weight for f, _ in self.pairs)

    def plus(self, q):
        f, g = self.pairs[q - 1]
        return f.vec + g.vec

    def minus(self, q):
        f, g = self.pairs[q - 1]
        return f.vec - g.vec

    def pair_range(self, q):
        """ran(f_q +- g_q)."""
        return self.plus(q).range

    def prefix_vectors(self, q):
        """(f_1, g_1, ..., f_{q-1}, g_{q-1}): the input of sigma for w(f_q)."""
        out = []
        for f, g in self.pairs[: q - 1]:
            out += [f.vec, g.vec]
        return out

    def _compute(self):
        raise DomainError("a special sequence is not a functional")


class _TypeII(Node):
    __slots__ = ()
    is_type_II = True

    seq = property(lambda self: self._key[0])
    F = property(lambda self: self._key[1])
    sign = property(lambda self: self._key[2])
    window = property(lambda self: self._key[3])

    def _check_F(self):
        d = len(self.seq)
        if any(not 1 <= q <= d for q in self.F):
            raise DomainError(f"selection {self.F} outside 1..{d}")


def _selection(F):
    F = tuple(int(q) for q in F)
    return F


class TypeIIPlus(_TypeII):
    """E (+-)(1/2) sum_{q in F} (f_q + g_q)."""
    __slots__ = ()
    kind = "II+"

    def __new__(cls, seq, F, sign=1, window=None):
        return cls._intern((seq, _selection(F), _sign(sign), _window(window)))

    def _compute(self):
        self._check_F()
        raw = lin_comb([Fraction(self.sign, 2)] * len(self.F),
                       [self.seq.plus(q) for q in self.F])
        return raw.restrict(self.window)


class TypeIIMinus(_TypeII):
    """E (+-)(1/2) sum_{q in F} lambda_q (f_q - g_q)."""
    __slots__ = ()
    kind = "II-"

    def __new__(cls, seq, F, lambdas, sign=1, window=None):
        F = _selection(F)
        lambdas = tuple(to_fraction(v) for v in lambdas)
        if len(lambdas) != len(F):
            raise DomainError("one lambda per selected pair is required")
        return cls._intern((seq, F, _sign(sign), _window(window), lambdas))

    lambdas = property(lambda self: self._key[4])

    def _compute(self):
        self._check_F()
        raw = lin_comb([Fraction(self.sign, 2) * lam for lam in self.lambdas],
                       [self.seq.minus(q) for q in self.F])
        return raw.restrict(self.window)


class ConvexComb(Node):
    __slots__ = ()
    kind = "convex"

    def __new__(cls, weights, summands):
        weights = tuple(to_fraction(w) for w in weights)
        summands = tuple(summands)
        if len(weights) != len(summands):
            raise DomainError("one weight per summand is required")
        return cls._intern((weights, summands))

    weights = property(lambda self: self._key[0])
    summands = property(lambda self: self._key[1])

    def _compute(self):
        return lin_comb(self.weights, [g.vec for g in self.summands])


# -- semantics --------------------------------------------------------------

def evaluate(f, x):
    """Exact f(x)."""
    if f._dense is None:
        object.__setattr__(f, "_dense", dict(f.vec.items()))
    d = f._dense
    return sum((v * d[k] for k, v in x.items() if k in d), Fraction(0))


def restrict(f, E):
    """E f for an interval E = (lo, hi), None bounds open."""
    E = _window(E)
    if _empty(E):
        return Zero()
    if isinstance(f, Zero):
        return f
    if isinstance(f, Unit):
        return f if _hits((f.index, f.index), E) else Zero()
    if isinstance(f, _Average):
        subs = [restrict(g, E) for g in f.summands]
        subs = [g for g in subs if not isinstance(g, Zero)]
        return type(f)(f.size, subs) if subs else Zero()
    if isinstance(f, ConvexComb):
        return ConvexComb(f.weights, [restrict(g, E) for g in f.summands])
    W = _meet(f.window, E)
    if _empty(W):
        return Zero()
    if isinstance(f, _TypeI):
        return type(f)(f.weight, f.averages, f.sign, W)
    if isinstance(f, TypeIIPlus):
        return TypeIIPlus(f.seq, f.F, f.sign, W)
    if isinstance(f, TypeIIMinus):
        return TypeIIMinus(f.seq, f.F, f.lambdas, f.sign, W)
    raise DomainError(f"cannot restrict a {f.kind} node")


def negate(f):
    """-f as a functional of the same clause."""
    if isinstance(f, Zero):
        return f
    if isinstance(f, Unit):
        return Unit(-f.sign, f.index)
    if isinstance(f, _Average):
        return type(f)(f.size, [negate(g) for g in f.summands])
    if isinstance(f, ConvexComb):
        return ConvexComb(f.weights, [negate(g) for g in f.summands])
    if isinstance(f, _TypeI):
        return type(f)(f.weight, f.averages, -f.sign, f.window)
    if isinstance(f, TypeIIPlus):
        return TypeIIPlus(f.seq, f.F, -f.sign, f.window)
    if isinstance(f, TypeIIMinus):
        return TypeIIMinus(f.seq, f.F, f.lambdas, -f.sign, f.window)
    raise DomainError(f"cannot negate a {f.kind} node")


def weight(f):
    """w(f) of a type I functional."""
    if not f.is_type_I:
        raise DomainError(f"w(f) is defined for type I functionals, not {f.kind}")
    return f.weight


def weight_set(f):
    """hat-w(f) = {w(f_q) : q in F, ran(f_q +- g_q) meets the window}."""
    if not f.is_type_II:
        raise DomainError(f"weight set is defined for type II functionals, not {f.kind}")
    seq = f.seq
    return {seq.pairs[q - 1][0].weight for q in f.F if _hits(seq.pair_range(q), f.window)}


def separates(f, x1, x2, x3):
    """Does the type II functional f separate x1 < x2 < x3?"""
    if not f.is_type_II:
        raise DomainError(f"separation is defined for type II functionals, not {f.kind}")
    xs = (x1, x2, x3)
    if any(not x for x in xs) or not (x1.max_supp < x2.min_supp and x2.max_supp < x3.min_supp):
        raise DomainError("x1 < x2 < x3 must be successive and nonzero")
    supp = f.vec.support
    for i, x in enumerate(xs, 1):
        lo, hi = x.range
        if not any(lo <= k <= hi for k in supp):
            raise DomainError(f"supp f misses ran x{i}")
    seq = f.seq
    for q in sorted(f.F):
        rng = seq.pair_range(q)
        if _hits(rng, x2.range):
            return not _hits(rng, x3.range)
    raise DomainError("no selected pair meets ran x2")


def branch_action(seq, xs):
    """For each x: (max_q |(f_q+g_q)(x)|, max_q |(f_q-g_q)(x)|) over the prefix."""
    out = []
    plus = [seq.plus(q) for q in range(1, len(seq) + 1)]
    minus = [seq.minus(q) for q in range(1, len(seq) + 1)]
    for x in xs:
        p = max((abs(v.dot(x)) for v in plus), default=Fraction(0))
        m = max((abs(v.dot(x)) for v in minus), default=Fraction(0))
        out.append((p, m))
    return out


def walk(f):
    """All nodes of the tree (pre-order, shared nodes repeated)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (_Average, ConvexComb)):
            stack.extend(reversed(g.summands))
        elif isinstance(g, _TypeI):
            stack.extend(reversed(g.averages))
        elif isinstance(g, _TypeII):
            stack.append(g.seq)
        elif isinstance(g, SpecialSequence):
            for a, b in reversed(g.pairs):
                stack += [b, a]


# -- text form ----------------------------------------------------------------

def _win_text(E):
    lo, hi = E
    return f"(win {'*' if lo is None else lo} {'*' if hi is None else hi})"


def _sg(s):
    return "+" if s > 0 else "-"


def dumps(f):
    """Canonical s-expression of a functional or special sequence."""
    memo = {}

    def go(g):
        hit = memo.get(id(g))
        if hit is not None:
            return hit
        if isinstance(g, Zero):
            s = "(zero)"
        elif isinstance(g, Unit):
            s = f"(unit {_sg(g.sign)} {g.index})"
        elif isinstance(g, _Average):
            s = f"({g.kind} {g.size}" + "".join(" " + go(h) for h in g.summands) + ")"
        elif isinstance(g, _TypeI):
            s = (f"({g.kind} {g.weight} {_sg(g.sign)} {_win_text(g.window)}"
                 + "".join(" " + go(a) for a in g.averages) + ")")
        elif isinstance(g, SpecialSequence):
            s = "(seq" + "".join(f" (pair {go(a)} {go(b)})" for a, b in g.pairs) + ")"
        elif isinstance(g, TypeIIPlus):
            s = (f"(II+ {_sg(g.sign)} {_win_text(g.window)} (F"
                 + "".join(f" {q}" for q in g.F) + f") {go(g.seq)})")
        elif isinstance(g, TypeIIMinus):
            s = (f"(II- {_sg(g.sign)} {_win_text(g.window)} (F"
                 + "".join(f" {q}" for q in g.F) + ") (lambda"
                 + "".join(f" {fmt(v)}" for v in g.lambdas) + f") {go(g.seq)})")
        elif isinstance(g, ConvexComb):
            s = "(convex" + "".join(
                f" ({fmt(w)} {go(h)})" for w, h in zip(g.weights, g.summands)) + ")"
        else:
            raise DomainError(f"cannot serialize {g!r}")
        memo[id(g)] = s
        return s

    return go(f)


def _tokens(text):
    out, word = [], []
    for ch in text:
        if ch in "()":
            if word:
                out.append("".join(word))
                word = []
            out.append(ch)
        elif ch.isspace():
            if word:
                out.append("".join(word))
                word = []
        else:
            word.append(ch)
    if word:
        out.append("".join(word))
    return out


def _tree(tokens):
    stack = [[]]
    for t in tokens:
        if t == "(":
            stack.append([])
        elif t == ")":
            if len(stack) < 2:
                raise DomainError("unbalanced parentheses")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1 or len(stack[0]) != 1:
        raise DomainError("expected exactly one s-expression")
    return stack[0][0]


def _bound(t):
    return None if t == "*" else int(t)


def _build(t):
    if not isinstance(t, list) or not t:
        raise DomainError(f"bad functional text near {t!r}")
    head, rest = t[0], t[1:]
    if head == "zero":
        return Zero()
    if head == "unit":
        return Unit(rest[0], int(rest[1]))
    if head in ("alpha", "beta"):
        cls = AlphaAvg if head == "alpha" else BetaAvg
        return cls(int(rest[0]), [_build(s) for s in rest[1:]])
    if head in ("I-alpha", "I-beta"):
        cls = TypeIAlpha if head == "I-alpha" else TypeIBeta
        win = rest[2]
        return cls(int(rest[0]), [_build(s) for s in rest[3:]], rest[1],
                   (_bound(win[1]), _bound(win[2])))
    if head == "seq":
        return SpecialSequence([(_build(p[1]), _build(p[2])) for p in rest])
    if head in ("II+", "II-"):
        win = rest[1]
        E = (_bound(win[1]), _bound(win[2]))
        F = [int(q) for q in rest[2][1:]]
        if head == "II+":
            return TypeIIPlus(_build(rest[3]), F, rest[0], E)
        lambdas = [to_fraction(v) for v in rest[3][1:]]
        return TypeIIMinus(_build(rest[4]), F, lambdas, rest[0], E)
    if head == "convex":
        return ConvexComb([to_fraction(p[0]) for p in rest], [_build(p[1]) for p in rest])
    raise DomainError(f"unknown node kind {head!r}")


def loads(text):
    try:
        return _build(_tree(_tokens(text)))
    except (IndexError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed functional text: {exc}") from None
