import json
from argparse import Namespace

import pytest

from hinorm.cli import RunConfig, main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.mark.parametrize("argv,want", [
    (["member", "--set", "2,3,4,5", "--level", "2"], "true"),
    (["member", "--set", "1,2", "--level", "1"], "false"),
    (["admissible", "--minsupps", "3,5,9", "--level", "1"], "true"),
    (["convolution", "--n", "1", "--m", "1", "--ground", "1..12"], "equal"),
])
def test_schreier(capsys, argv, want):
    rc, out, _ = run(capsys, "schreier", *argv)
    assert rc == 0 and out.strip() == want


def test_schreier_enumerate(capsys):
    rc, out, _ = run(capsys, "schreier", "enumerate", "--level", "1", "--ground", "1..3")
    assert rc == 0
    assert out.split() == ["{}", "{1}", "{2}", "{3}", "{2,3}"]


@pytest.mark.parametrize("argv", [
    ["schreier", "member", "--set", "2,x", "--level", "1"],
    ["schreier", "enumerate", "--level", "1", "--ground", "1-4"],
    ["suite", "run", "no-such"],
    ["norm", "/nonexistent/vec.txt"],
    ["build", "nope"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_build_scc_and_validate(capsys, tmp_path):
    out_file = tmp_path / "w.txt"
    rc, out, _ = run(capsys, "build", "scc", "--n", "1", "--eps", "1/8", "--from", "10",
                     "--out", str(out_file))
    assert rc == 0 and out.strip().endswith("valid")
    rc, out, _ = run(capsys, "validate", str(out_file))
    assert rc == 0 and "valid" in out
    # a tampered file no longer matches its recipe
    text = out_file.read_text().replace("10:", "11:", 1)
    out_file.write_text(text)
    rc, _, err = run(capsys, "validate", str(out_file))
    assert rc == 1 and "integrity" in err


def test_strict_exact_pair_is_infeasible(capsys):
    rc, _, err = run(capsys, "build", "exact-pair", "--profile", "strict", "--n", "11")
    assert rc == 3
    assert "support floor" in err


def test_dependent_identities(capsys):
    rc, out, _ = run(capsys, "build", "dependent", "--d", "2", "--profile", "desk")
    assert rc == 0
    rows = [l for l in out.splitlines() if "identities" in l]
    assert rows and all(l.split("identities ")[1] == "2 2 0" for l in rows)


def test_norm_unit(capsys, tmp_path):
    v = tmp_path / "e7.txt"
    v.write_text("# finvec v1\n7:1/1\n")
    rc, out, _ = run(capsys, "norm", str(v))
    assert rc == 0 and out.splitlines()[0] == "interval [1, 1]"


def test_norm_exact_pair(capsys, tmp_path):
    from fractions import Fraction
    w = tmp_path / "p.txt"
    assert run(capsys, "build", "exact-pair", "--out", str(w))[0] == 0
    x = tmp_path / "x.txt"
    x.write_text(w.read_text().split("== x\n")[1].split("== ")[0])
    rc, out, _ = run(capsys, "norm", str(x), "--hint", str(w))
    lo, hi = out.splitlines()[0].removeprefix("interval [").rstrip("]").split(", ")
    assert rc == 0 and 1 <= Fraction(lo) <= Fraction(hi) <= 36


def test_norm_scc_cites_domination(capsys, tmp_path):
    w = tmp_path / "s.txt"
    run(capsys, "build", "scc", "--out", str(w))
    x = tmp_path / "x.txt"
    x.write_text(w.read_text().split("== x\n")[1].split("== ")[0])
    rc, out, _ = run(capsys, "norm", str(x), "--hint", str(w))
    assert rc == 0 and "cor2.6" in out


def test_suite_prop24(capsys):
    rc, out, err = run(capsys, "suite", "run", "prop2.4", "--count", "100", "--seed", "7")
    recs = [json.loads(l) for l in out.splitlines()]
    assert rc == 0 and len(recs) == 100
    assert all(r["verdict"] == "ok" for r in recs)
    assert "0 violations" in err


def test_suite_prop75(capsys):
    rc, out, _ = run(capsys, "suite", "run", "prop7.5")
    assert rc == 0 and out


def test_suite_list(capsys):
    rc, out, _ = run(capsys, "suite", "list")
    assert rc == 0 and out.splitlines()[0].startswith("prop2.4")


def test_config_roundtrip(capsys, tmp_path):
    cfg = RunConfig(profile="strict", overrides={"card_factor": 3, "eps_factor": "1/64"},
                    budget=2, seed=9, threads=4, count=5, table="t.log", out="o.jsonl")
    from fractions import Fraction
    cfg.overrides["eps_factor"] = Fraction(1, 64)
    back = RunConfig.loads(cfg.dumps())
    assert back == cfg
    f = tmp_path / "c.cfg"
    f.write_text(cfg.dumps())
    rc, out, _ = run(capsys, "config", "--config", str(f), "--seed", "1")
    got = RunConfig.loads(out)
    assert got.seed == 1 and got.profile == "strict" and got.overrides == cfg.overrides


def test_flags_override_file():
    base = RunConfig(seed=3, threads=2)
    args = Namespace(seed=5, threads=None, set=["card_factor=4"])
    m = base.merged(args)
    assert (m.seed, m.threads, m.overrides) == (5, 2, {"card_factor": 4})
