from fractions import Fraction

import pytest

from hinorm.constructions import (build_dependent_sequence, build_exact_pair,
                                  build_exact_vector, build_ris, finite_operator_S, identity,
                                  lemma66_holds, mat_add, mat_mul, remark65_identities,
                                  series_alpha_bound, unit_blocks, validate_dependent_sequence,
                                  validate_exact_pair, validate_exact_vector, validate_ris)
from hinorm.engine.suites import random_blocks
from hinorm.errors import DomainError, ResourceLimitError
from hinorm.normingset.functionals import evaluate
from hinorm.normingset.ubasis import u_norm
from hinorm.normingset.validate import validate_functional
from hinorm.tsirelson import tsirelson_upper
from hinorm.vectors import FinVec

ETA = Fraction(1, 72)


def test_ris(desk):
    # C = 1 fails: a weight-1 functional gives |f(e_k)| = 1/2, not strictly below 1/2
    with pytest.raises(DomainError, match="too small"):
        build_ris(unit_blocks, 1, 5, desk)
    w = build_ris(unit_blocks, 2, 5, desk)
    assert validate_ris(w, desk) == []
    assert len(w.blocks) == 5
    assert all(b <= 1 for b in w.norm_bounds)
    assert list(w.nks) == sorted(set(w.nks))


def test_exact_vector_desk(desk):
    blocks = [FinVec.unit(k) for k in range(301, 2000)]
    ev = build_exact_vector(blocks, 1, 1, desk, epsilon=Fraction(1, 300))
    assert validate_exact_vector(ev, desk) == []
    assert ev.x == ev.scc.vector.scale(2)
    assert evaluate(ev.certificate, ev.x) == ev.theta
    assert ev.upper == tsirelson_upper(ev.x)
    assert validate_functional(ev.certificate, desk) == []


def test_exact_vector_strict_floor(strict):
    with pytest.raises(ResourceLimitError, match="support floor"):
        build_exact_vector([FinVec.unit(k) for k in range(2, 40)], 5, 11, strict)


@pytest.mark.parametrize("n,src", [(1, unit_blocks), (1, random_blocks("c1")),
                                   (4, unit_blocks), (4, random_blocks("c4"))])
def test_exact_pair(desk, n, src):
    p = build_exact_pair(src, n, ETA, desk)
    assert validate_exact_pair(p, desk) == []
    assert evaluate(p.f, p.x) == 1
    assert p.f.weight == n
    assert Fraction(35, 36) < evaluate(p.f, p.xprime) <= 1


def test_exact_pair_rejects_uncovered_blocks(desk):
    # blocks peaking at their first coordinate leave max supp x beyond f
    def source(after):
        k = after + 1
        while True:
            yield FinVec({k: 1, k + 1: Fraction(1, 2)})
            k += 2
    with pytest.raises(DomainError, match="max supp"):
        build_exact_pair(source, 1, ETA, desk)


def test_exact_pair_bad_eta(desk):
    with pytest.raises(DomainError):
        build_exact_pair(unit_blocks, 1, Fraction(1, 2), desk)
    with pytest.raises(DomainError):
        build_exact_pair(unit_blocks, 3, ETA, desk)     # 3 lies in L3

def test_dependent_sequence(desk, dep4):
    assert validate_dependent_sequence(dep4, desk) == []
    w = dep4.weights
    assert desk.in_L(w[0], 1)
    assert all(desk.in_L(v, 2) for v in w[1:])
    for nd in dep4.nodes:
        values = [v for _, v, _ in remark65_identities(nd)]
        assert values == [2, 2, 0, 1, 1]
    assert all(lemma66_holds(dep4, k) for k in range(1, len(dep4)))


def test_dependent_sequence_replays_from_table(desk, dep4):
    again = build_dependent_sequence(random_blocks("t:x"), random_blocks("t:y"), 4, desk)
    assert again.weights == dep4.weights
    assert [nd.x for nd in again.nodes] == [nd.x for nd in dep4.nodes]


def test_clause5_certificate(desk, dep4):
    c = {1: Fraction(2), 3: Fraction(-1, 3), 4: Fraction(1, 2)}
    value, g = dep4.clause5_certificate(c)
    z = dep4.combination(c)
    assert value == u_norm(c)
    assert evaluate(g, z) == value
    assert validate_functional(g, desk, dep4.table) == []


def test_operator_S(dep4):
    S, labels = finite_operator_S(dep4, [1, 2, 3, 4])
    m = len(S)
    assert labels[:2] == ["x1", "y1"]
    zero = [[0] * m for _ in range(m)]
    assert mat_mul(S, S) == zero
    assert mat_mul(mat_add(identity(m), S, -1), mat_add(identity(m), S)) == identity(m)
    with pytest.raises(DomainError):
        finite_operator_S(dep4, [1, 1])


@pytest.mark.parametrize("qp,p", [(2, 3), (2, Fraction(5, 2)), (3, 4)])
def test_series_bound(qp, p):
    b = series_alpha_bound(Fraction(qp), Fraction(p), 30)
    assert b.holds
    assert b.partial_upper <= b.alpha_lower <= b.alpha_upper
