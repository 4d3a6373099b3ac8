import threading

import pytest

from hinorm.errors import IntegrityError
from hinorm.normingset.coding import CodingTable, sigma
from hinorm.vectors import FinVec


def _prefix(k):
    return [FinVec({k: 1}), FinVec({k + 1: 1})]


def test_sigma_is_injective_and_above_floor(desk):
    t = CodingTable(desk)
    values = [sigma(_prefix(k), t) for k in range(1, 40, 2)]
    assert len(set(values)) == len(values)
    for k, v in zip(range(1, 40, 2), values):
        assert desk.in_L(v, 2)
        assert v > desk.sigma_floor(_prefix(k)[-1])
    # memoised
    assert sigma(_prefix(1), t) == values[0]


def test_peek_does_not_commit(desk):
    t = CodingTable(desk)
    v = t.peek(_prefix(5))
    assert len(t) == 0
    assert sigma(_prefix(5), t) == v


def test_fork_is_private(desk):
    t = CodingTable(desk)
    a = sigma(_prefix(1), t)
    twin = t.fork()
    assert twin.lookup(_prefix(1)) == a
    sigma(_prefix(3), twin)
    assert t.lookup(_prefix(3)) is None
    assert len(t) == 1 and len(twin) == 2


def test_persistence_and_replay(desk, tmp_path):
    path = str(tmp_path / "sigma.log")
    t = CodingTable(desk, path)
    vals = [sigma(_prefix(k), t) for k in (1, 4, 9)]
    again = CodingTable(desk, path)
    assert [again.lookup(_prefix(k)) for k in (1, 4, 9)] == vals
    # new values continue the sequence as if the table never closed
    fresh = CodingTable(desk)
    assert [sigma(_prefix(k), fresh) for k in (1, 4, 9, 12)][:3] == vals
    assert sigma(_prefix(12), again) == fresh.lookup(_prefix(12))


@pytest.mark.parametrize("mangle", [
    lambda lines: lines[:1] + [lines[1].rsplit("\t", 1)[0] + "\t99999"],
    lambda lines: lines + [lines[0]],
    lambda lines: [lines[0].replace("\t", " ")],
])
def test_tampered_log_is_rejected(desk, tmp_path, mangle):
    path = tmp_path / "sigma.log"
    t = CodingTable(desk, str(path))
    for k in (1, 4):
        sigma(_prefix(k), t)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(mangle(lines)) + "\n")
    with pytest.raises(IntegrityError):
        CodingTable(desk, str(path))


def test_concurrent_sigma_is_consistent(desk):
    t = CodingTable(desk)
    out = {}

    def work(k):
        out[k] = sigma(_prefix(k), t)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(1, 60, 2)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(set(out.values())) == len(out)
