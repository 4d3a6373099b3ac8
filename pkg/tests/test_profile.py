from fractions import Fraction
from itertools import islice

import pytest

from hinorm.errors import DomainError
from hinorm.normingset.profile import make_profile, with_overrides
from hinorm.vectors import FinVec


def test_desk_partition(desk):
    assert [desk.ell(k) for k in range(1, 7)] == [1, 2, 3, 4, 5, 6]
    assert list(islice(desk.elements(1), 4)) == [1, 4, 7, 10]
    assert list(islice(desk.elements(2), 4)) == [2, 5, 8, 11]
    assert list(islice(desk.elements(2, above=20), 2)) == [23, 26]
    assert desk.in_L(4, 1) and desk.in_L(5, 2) and not desk.in_L(6, 1)
    assert not desk.in_L(6, 2)


def test_desk_thresholds(desk):
    assert desk.support_floor(5, 3) == 0
    assert desk.eps_cap(1, 4) == 2
    assert desk.sigma_floor(FinVec({3: 1, 9: Fraction(1, 2)})) == 18
    assert desk.vfg_ok(3, 2, 100) and not desk.vfg_ok(2, 2, 1)
    assert desk.card_factor == 2


def test_strict_profile(strict):
    assert strict.ell(1) == 11
    assert strict.ell(2) == 2 ** 22 + 1
    assert strict.in_L(11, 1) and strict.in_L(2 ** 22 + 1, 2)
    assert not strict.in_L(12, 1)
    assert strict.support_floor(5, 11) == 8 * 5 * 4 ** 11
    assert strict.eps_cap(5, 1) == Fraction(1, 32 * 5 * 8)
    assert not strict.vfg_ok(5, 1, 3) and strict.vfg_ok(9, 1, 3)
    assert strict.lacunarity_violations() == []
    assert strict.tail_bound() < Fraction(1, 1000)


@pytest.mark.parametrize("overrides", [
    {"l1": 9}, {"growth": "linear"}, {"card_factor": 3}, {"vfg_exponential": False},
])
def test_strict_rejects_weakening(overrides):
    with pytest.raises(DomainError):
        make_profile("strict", overrides)


def test_unknown_parameters():
    with pytest.raises(DomainError):
        make_profile("desk", {"nope": 1})
    with pytest.raises(DomainError):
        make_profile("loose")


def test_overrides(desk):
    p = with_overrides(desk, card_factor=3)
    assert p.card_factor == 3 and desk.card_factor == 2
    assert make_profile("desk", {"floor_factor": "1/2"}).floor_factor == Fraction(1, 2)
