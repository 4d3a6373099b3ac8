import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hinorm.errors import ResourceLimitError
from hinorm.tsirelson import max_subset_excess, tsirelson_norm, tsirelson_upper
from hinorm.vectors import FinVec
from oracles import naive_tsirelson, subset_excess_brute, tsirelson_norming_set


@pytest.fixture(scope="module")
def K8():
    return np.array(sorted(tsirelson_norming_set(8)), dtype=np.int64)


def test_known_values():
    assert tsirelson_norm(FinVec.unit(4, -3)) == 3
    # e_2 + e_3: the pair {2, 3} is admissible, so the norm is 1
    assert tsirelson_norm(FinVec({2: 1, 3: 1})) == 1
    # e_1 + e_2: only singletons start at 1
    assert tsirelson_norm(FinVec({1: 1, 2: 1})) == 1
    # 3 e_3..e_5: (1/2) * 3 = 3/2
    assert tsirelson_norm(FinVec({3: 1, 4: 1, 5: 1})) == Fraction(3, 2)


def test_sample_grid_matches_norming_set(K8):
    # every support in [1, 8], coefficients 0, 1/2, 1 and random signs
    rng = random.Random(3)
    values = (Fraction(0), Fraction(1, 2), Fraction(1))
    for pattern in rng.sample(list(product(values, repeat=8)), 1500):
        x = FinVec({k + 1: v * rng.choice((1, -1)) for k, v in enumerate(pattern)})
        assert tsirelson_norm(x) == naive_tsirelson(x, K8)


@given(st.dictionaries(st.integers(1, 8), st.sampled_from([1, -1, Fraction(1, 2),
                                                            Fraction(-1, 2)]), max_size=8))
def test_norm_matches_norming_set(K8, d):
    x = FinVec(d)
    assert tsirelson_norm(x) == naive_tsirelson(x, K8)


@given(st.dictionaries(st.integers(1, 40), st.fractions(-3, 3, max_denominator=5),
                       max_size=10))
def test_norm_between_sup_and_l1(d):
    x = FinVec(d)
    n = tsirelson_norm(x)
    assert x.sup_norm() <= n <= x.l1_norm()
    assert tsirelson_upper(x) == n


def test_threshold():
    x = FinVec({k: 1 for k in range(10, 40)})
    with pytest.raises(ResourceLimitError):
        tsirelson_norm(x)
    assert tsirelson_upper(x) == x.l1_norm()


@given(st.dictionaries(st.integers(1, 25), st.fractions(-2, 2, max_denominator=4),
                       min_size=1, max_size=9),
       st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 3), Fraction(1)]))
def test_subset_excess_matches_brute_force(d, lam):
    x = FinVec(d)
    if not x:
        return
    value, G = max_subset_excess(x, lam)
    assert value == subset_excess_brute(x, lam, tsirelson_norm)
    # the reported subset attains it
    if G:
        xg = FinVec({k: x[k] for k in G})
        assert tsirelson_norm(xg) - lam * xg.l1_norm() == value


def test_subset_excess_rejects_zero_lambda():
    with pytest.raises(ValueError):
        max_subset_excess(FinVec.unit(3), 0)
