from fractions import Fraction

from hypothesis import given, strategies as st

from hinorm.engine import alpha_probe, beta_probe, branch_probe, sample_functionals
from hinorm.normingset.functionals import evaluate
from hinorm.normingset.validate import validate_functional
from hinorm.vectors import FinVec

units = [FinVec.unit(k) for k in range(5, 9)]


def test_alpha_probe_on_units(desk):
    assert alpha_probe(units, 1, 1, desk) == 1


def test_alpha_probe_is_bounded_by_l1(desk):
    xs = [FinVec({k: Fraction(1, 3) for k in range(10, 16)})]
    v = alpha_probe(xs, 2, 1, desk)
    assert 0 < v <= xs[0].l1_norm()


def test_beta_probe_is_a_fraction_of_the_sup(desk):
    v = beta_probe(units, 1, 1, desk)
    assert 0 < v <= 1


def test_branch_probe_is_diagonal(dep2):
    n = len(dep2.nodes)
    for xs in ([nd.x for nd in dep2.nodes], [nd.y for nd in dep2.nodes]):
        rows = branch_probe(dep2, xs)
        for k in range(n):
            for q in range(n):
                want = (1, 1) if k == q else (0, 0)
                assert rows[k][q] == want


@given(st.integers(0, 10**6))
def test_samples_are_valid_and_touch_x(desk, seed):
    x = FinVec({k: Fraction(k % 5 - 2, 3) or 1 for k in range(4, 24)})
    fs = list(sample_functionals(x, 6, seed, desk))
    assert len(fs) == 6
    for f in fs:
        assert validate_functional(f, desk) == []
        assert abs(evaluate(f, x)) <= x.l1_norm()
        assert set(f.vec.support) & set(x.support)


def test_sampling_is_deterministic(desk):
    x = FinVec({k: 1 for k in range(3, 20)})
    a = list(sample_functionals(x, 20, 5, desk))
    b = list(sample_functionals(x, 20, 5, desk))
    assert a == b
    c = list(sample_functionals(x, 20, 6, desk))
    assert a != c
