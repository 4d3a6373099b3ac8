from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hinorm.errors import DomainError
from hinorm.engine.sampling import sample_functionals
from hinorm.normingset.functionals import (AlphaAvg, TypeIAlpha, Unit, Zero,
                                           dumps, evaluate, loads, negate, restrict,
                                           separates, weight, weight_set)
from hinorm.normingset.validate import validate_functional
from hinorm.vectors import FinVec
from oracles import separates_brute

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=5)
vectors = st.dictionaries(st.integers(1, 60), rationals, max_size=10).map(FinVec)
BASE = FinVec({k: Fraction(1, k) for k in range(2, 60, 3)})


@pytest.fixture(scope="module")
def pool(desk):
    return list(sample_functionals(BASE, 120, 11, desk))


def test_unit_and_zero():
    x = FinVec({3: Fraction(2, 3), 5: 1})
    assert evaluate(Unit(-1, 3), x) == Fraction(-2, 3)
    assert evaluate(Zero(), x) == 0
    with pytest.raises(DomainError):
        Unit(1, 0)


def test_type_I_value():
    f = TypeIAlpha(1, [AlphaAvg(2, [Unit(1, 2), Unit(1, 3)]), AlphaAvg(3, [Unit(1, 5)])])
    x = FinVec({2: 1, 3: 1, 5: 3})
    assert evaluate(f, x) == Fraction(1, 2) * (1 + 1)
    assert weight(f) == 1


def test_interning():
    a = TypeIAlpha(1, [AlphaAvg(1, [Unit(1, 2)])])
    b = TypeIAlpha(1, [AlphaAvg(1, [Unit(1, 2)])])
    assert a is b
    with pytest.raises(AttributeError):
        a.foo = 1


@given(st.integers(0, 119), vectors, vectors, rationals)
def test_linearity(pool, i, x, y, a):
    f = pool[i]
    assert evaluate(f, x + y.scale(a)) == evaluate(f, x) + a * evaluate(f, y)


@given(st.integers(0, 119), st.integers(1, 60), st.integers(0, 30), vectors)
def test_restriction(desk, pool, i, lo, width, x):
    f = pool[i]
    E = (lo, lo + width)
    g = restrict(f, E)
    assert evaluate(g, x) == evaluate(f, x.restrict(E))
    if not isinstance(g, Zero):
        assert g.kind == f.kind
    assert validate_functional(g, desk) == []


@given(st.integers(0, 119), vectors)
def test_negation(desk, pool, i, x):
    f = pool[i]
    g = negate(f)
    assert evaluate(g, x) == -evaluate(f, x)
    assert g.kind == f.kind
    assert validate_functional(g, desk) == []


@given(st.integers(0, 119))
def test_sexpr_roundtrip(pool, i):
    f = pool[i]
    assert loads(dumps(f)) is f


def test_sampled_functionals_are_valid_and_norm_bounded(desk, pool):
    for f in pool:
        assert validate_functional(f, desk) == []
        # members of W have sup-norm at most 1
        assert f.vec.sup_norm() <= 1


def test_weight_set_and_separation(dep4):
    f = dep4.plus_functional()
    assert weight_set(f) == set(dep4.weights)
    xs = [nd.x for nd in dep4.nodes]
    ys = [nd.y for nd in dep4.nodes]
    for a, b, c in [(xs[0], ys[1], xs[3]), (xs[0], xs[1], ys[1]), (ys[0], xs[2], ys[3])]:
        assert separates(f, a, b, c) == separates_brute(f, a, b, c)
    with pytest.raises(DomainError):
        separates(Unit(1, 2), xs[0], xs[1], xs[2])
    with pytest.raises(DomainError):
        weight_set(Unit(1, 2))


def test_sample_clause_coverage(desk):
    fs = list(sample_functionals(BASE, 300, 5, desk))
    kinds = {f.kind for f in fs}
    assert {"0", "I-alpha", "I-beta", "II+", "II-"} <= kinds
    assert all(any(BASE.min_supp <= k <= BASE.max_supp for k in f.vec.support)
               or not f.vec for f in fs)


def test_sampling_is_deterministic(desk):
    a = sample_functionals(BASE, 50, 2, desk)
    b = sample_functionals(BASE, 50, 2, desk)
    assert [dumps(f) for f in a] == [dumps(f) for f in b]
    c = sample_functionals(BASE, 50, 3, desk)
    assert [dumps(f) for f in a] != [dumps(f) for f in c]
