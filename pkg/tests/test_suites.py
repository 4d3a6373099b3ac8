import json

import pytest

from hinorm.engine import SUITES, check_suite
from hinorm.errors import DomainError

SMALL = {"count": 2, "samples": 20, "coeffs": 2, "d": 2, "J": 10}


def test_unknown_suite():
    with pytest.raises(DomainError):
        check_suite("prop9.9")


@pytest.mark.parametrize("name", list(SUITES))
def test_small_runs_are_clean(desk, name):
    rep = check_suite(name, SMALL, desk, seed=3)
    assert rep.name == name
    assert rep.checks > 0
    assert rep.independent_violations == 0
    lines = rep.to_jsonl().splitlines()
    assert len(lines) == len(rep.records)
    for line in lines:
        rec = json.loads(line)
        assert rec["suite"] == name and rec["verdict"] in ("ok", "flagged") or rec["kind"] == "sampled"
        assert rec["profile"] == "desk" and rec["seed"] == 3


@pytest.mark.parametrize("name", ["prop2.4", "cor2.6", "remark6.5", "prop6.8"])
def test_jsonl_is_reproducible(desk, name):
    a = check_suite(name, SMALL, desk, seed=11, threads=1).to_jsonl()
    b = check_suite(name, SMALL, desk, seed=11, threads=4).to_jsonl()
    assert a == b


def test_seed_changes_sampled_suites(desk):
    a = check_suite("prop2.4", {"count": 3}, desk, seed=1).to_jsonl()
    b = check_suite("prop2.4", {"count": 3}, desk, seed=2).to_jsonl()
    assert a != b


def test_record_count_follows_count(desk):
    assert len(check_suite("prop2.4", {"count": 7}, desk).records) == 7
