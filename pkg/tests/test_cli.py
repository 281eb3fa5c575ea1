from __future__ import annotations

import csv
import io
import json

import pytest

from tropgc.cli import CACHE_ENV, CACHE_FORMAT, build_parser, main, parse_degrees


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_degrees():
    assert parse_degrees("-2..3") == (-2, 3)
    assert parse_degrees("0") == (0, 0)
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        parse_degrees("3..1")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_degrees("x")


def test_enumerate_trivalent_genus_2(capsys):
    code, out, err = run(capsys, "enumerate", "--genus", "2", "--kind", "trivalent")
    assert code == 0
    assert len(out.splitlines()) == 2
    assert "(2,3):2" in err


def test_enumerate_gc_generators_with_degree(capsys):
    code, out, _ = run(capsys, "enumerate", "--genus", "3", "--kind", "gc-generators", "--degree", "0")
    recs = [json.loads(line) for line in out.splitlines()]
    k4 = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
    assert code == 0 and any(r["edges"] == k4 for r in recs)


def test_enumerate_deterministic_and_cached(tmp_path, capsys, monkeypatch):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(capsys, "enumerate", "--genus", "3", "--kind", "jg", "--out", str(a))[0] == 0
    cache = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(cache))
    assert run(capsys, "enumerate", "--genus", "3", "--kind", "jg", "--out", str(b))[0] == 0
    cached = cache / "g3" / "jg.jsonl"
    assert cached.read_text().startswith(CACHE_FORMAT + "\n")
    assert a.read_bytes() == b.read_bytes()
    # warm run from the cache, then a stale header is ignored
    assert run(capsys, "enumerate", "--genus", "3", "--kind", "jg", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    cached.write_text("# old format\n")
    assert run(capsys, "enumerate", "--genus", "3", "--kind", "jg", "--out", str(b), "--cache", str(cache))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 42


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "enumerate", "--genus", "1", "--kind", "jg")[0] == 1
    assert run(capsys, "enumerate", "--genus", "3")[0] == 1
    assert run(capsys, "verify", "nonsense", "--genus", "3")[0] == 1
    assert run(capsys, "homology", "--genus", "3", "--mod-p", "100")[0] == 1
    assert run(capsys, "homology", "--genus", "4", "--complex", "delta")[0] == 1
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "growth", "--max", "20", "--out", str(blocker / "x.csv"))[0] == 1


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_homology_gc_genus_3(capsys):
    code, out, _ = run(capsys, "homology", "--genus", "3", "--complex", "gc")
    rows = _rows(out)
    assert code == 0
    assert list(rows[0]) == ["complex", "genus", "degree", "dim_chains", "rank_in", "rank_out", "dim_homology"]
    assert {int(r["degree"]): int(r["dim_homology"]) for r in rows} == {-2: 0, -1: 0, 0: 1}


def test_homology_b_genus_4_and_delta_genus_2(capsys):
    _, out, _ = run(capsys, "homology", "--genus", "4", "--complex", "b")
    assert all(r["dim_homology"] == "0" for r in _rows(out))
    _, out, _ = run(capsys, "homology", "--genus", "2", "--complex", "delta")
    assert all(r["dim_homology"] == "0" for r in _rows(out))


def test_homology_degree_window_and_mod_p(capsys):
    _, out, _ = run(capsys, "homology", "--genus", "3", "--complex", "c", "--degrees", "4..5", "--mod-p", "101")
    rows = _rows(out)
    assert [r["degree"] for r in rows] == ["4", "5"]
    assert rows[1]["dim_homology"] == "1"


def test_negative_degree_range(capsys):
    code, out, _ = run(capsys, "homology", "--genus", "5", "--degrees", "-2..0")
    assert code == 0 and [r["degree"] for r in _rows(out)] == ["-2", "-1", "0"]
    code, out, _ = run(capsys, "homology", "--genus", "5", "--degree", "-1")
    assert code == 0 and [r["degree"] for r in _rows(out)] == ["-1"]


def test_export(capsys):
    code, out, _ = run(capsys, "export", "--genus", "4", "--complex", "c")
    data = json.loads(out)
    assert code == 0 and data["genus"] == 4
    for d in data["degrees"].values():
        trip = d["boundary"]["triplets"]
        assert trip == sorted(trip, key=lambda t: (t[1], t[0]))
    _, out, _ = run(capsys, "export", "--genus", "2", "--complex", "delta")
    data = json.loads(out)
    top = data["degrees"]["2"]["basis"][0]
    assert top["flags"][-1] == list(range(top["dim"] + 1))


@pytest.mark.parametrize("suite,genus", [("shift", 3), ("relations", 3), ("signs", 4), ("duality", 4),
                                         ("acyclic", 3), ("subdivision", 2), ("wheel", 5), ("wheel", 4)])
def test_verify_suites(capsys, suite, genus):
    code, out, _ = run(capsys, "verify", suite, "--genus", str(genus))
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["suite"] == suite


def test_verify_wheel_report(capsys):
    _, out, _ = run(capsys, "verify", "wheel", "--genus", "5")
    names = {c["name"] for c in json.loads(out)["checks"]}
    assert {"boundary of W_5 is 0", "W_5 is not a boundary"} <= names


def test_verify_duality_genus_5_reports_weighted_transpose(capsys):
    code, out, _ = run(capsys, "verify", "duality", "--genus", "5")
    rep = json.loads(out)
    assert code == 0 and rep["checks"][0]["detail"] == "exact transpose: no"


def test_verify_growth(capsys):
    code, out, _ = run(capsys, "verify", "growth")
    assert code == 0 and json.loads(out)["ok"]


def test_growth_csv(tmp_path, capsys):
    path = tmp_path / "g.csv"
    assert run(capsys, "growth", "--max", "40", "--out", str(path))[0] == 0
    rows = _rows(path.read_text())
    assert len(rows) == 40 and rows[2] == {"n": "3", "a_n": "3", "A_n": "1", "product": "1.29047912700584"}


def test_parser_flags():
    flags = {a.option_strings[0] for a in build_parser()._subparsers._group_actions[0].choices["homology"]._actions
             if a.option_strings}
    assert {"--genus", "--kind", "--complex", "--degrees", "--mod-p", "--out", "--cache", "--max"} <= flags


def test_square_zero_failure_exits_2(capsys, monkeypatch):
    from tropgc import cli
    from tropgc.exactla import GradedChainComplex, SparseIntMatrix

    bad = GradedChainComplex({0: ["v"], 1: ["e"], 2: ["f"]},
                             {1: SparseIntMatrix(1, 1, {(0, 0): 1}), 2: SparseIntMatrix(1, 1, {(0, 0): 1})}, "bad")
    monkeypatch.setattr(cli, "build_complex", lambda name, g: bad)
    code, _, err = run(capsys, "homology", "--genus", "3")
    assert code == 2 and "'f'" in err
