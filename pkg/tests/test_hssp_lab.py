import json

import pytest

from hssp_lab import main

AFF7_PM1 = '{"kind":"affine","q":7,"H":[1,6]}'


def run(capsys, *argv):
    code = main(["--quiet", *argv])
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_solve_hqpp_example(capsys):
    code, records = run(capsys, "solve", "hqpp", "--q", "7", "--hidden", '{"u":3}')
    assert code == 0
    (rec,) = records
    assert rec["u"] == 3
    assert rec["correct"] is True
    assert rec["paths"] == {"B": 3}
    assert rec["queries"] == 7


def test_solve_hqpp_both_paths_scrambled(capsys):
    code, records = run(capsys, "solve", "hqpp", "--q", "9", "--hidden", '{"u":5}', "--path", "both", "--scramble")
    assert code == 0
    assert records[0]["paths"] == {"A": 5, "B": 5}


def test_solve_hpp2_records_the_trace(capsys):
    code, records = run(capsys, "solve", "hpp2", "--q", "5", "--trials", "3", "--seed", "9")
    assert code == 0
    assert [r["trial"] for r in records] == [0, 1, 2]
    for r in records:
        assert r["labels"] == ["a11", "a22", "a12", "b1", "b2"]
        assert r["trace"]["r_calls"] <= r["trace"]["r_call_bound"] == 36


def test_same_seed_same_bytes(capsys):
    argv = ("solve", "hpp2", "--q", "7", "--n", "3", "--trials", "2", "--seed", "5")
    main(["--quiet", *argv])
    first = capsys.readouterr().out
    main(["--quiet", "--jobs", "2", *argv])
    second = capsys.readouterr().out
    assert first == second


def test_solve_hpgp_univariate_and_bivariate(capsys):
    code, records = run(capsys, "solve", "hpgp", "--q", "5", "--hidden", '{"terms":[{"exp":[2],"coef":1}]}', "--path", "both")
    assert code == 0
    assert records[0]["terms"] == [{"exp": [2], "coef": 1}]
    code, records = run(capsys, "solve", "hpgp", "--q", "5", "--n", "2", "--d", "2", "--seed", "3")
    assert code == 0
    assert records[0]["solves"] == 5
    assert records[0]["correct"] is True


def test_solve_grover(capsys):
    code, records = run(capsys, "solve", "grover", "--q", "5", "--hidden", '{"c":4}')
    assert code == 0
    assert (records[0]["c"], records[0]["queries"]) == (4, 5)
    code, records = run(capsys, "solve", "grover", "--q", "7", "--hidden", '{"c":2}', "--path", "A")
    assert records[0]["paths"] == {"A": 2}


def test_solve_zpmzp(capsys):
    code, records = run(capsys, "solve", "zpmzp", "--p", "3", "--hidden", '{"v":[1,2],"y0":[2,0]}')
    assert code == 0
    assert records[0]["v"] == [1, 2]
    assert records[0]["d"] == 2
    code, records = run(capsys, "solve", "zpmzp", "--p", "5", "--m", "3", "--seed", "1")
    assert code == 0 and records[0]["correct"] is True


def test_vandermonde_verb(capsys, tmp_path):
    target = tmp_path / "system.json"
    code, records = run(capsys, "vandermonde", "--q", "7", "--n", "2", "--d", "2", "--emit", str(target))
    assert code == 0
    assert records[0]["rank"] == 5
    assert records[0]["size"] == 5
    assert json.loads(target.read_text())["points"][0] == [1, 1]


def test_base_verbs(capsys):
    code, records = run(capsys, "base", "deterministic", "--group", AFF7_PM1)
    assert code == 0
    assert records[0]["points"] == [0, 1] and records[0]["verified"] is True
    code, records = run(capsys, "base", "verify", "--group", AFF7_PM1, "--points", "[0,1]")
    assert code == 0
    code, records = run(capsys, "base", "random", "--group", '{"kind":"affine","q":13,"H_order":3}', "--trials", "10")
    assert code == 0
    assert records[0]["trials"] == 10


def test_fg_base_points(capsys):
    code, records = run(capsys, "base", "deterministic", "--group", '{"kind":"fg","q":5,"d":2}')
    assert code == 0
    assert records[0]["points"] == [[[0], 0], [[1], 0], [[2], 0]]


def test_separators_verb(capsys):
    code, records = run(capsys, "separators", "--group", AFF7_PM1)
    assert code == 0
    assert records[0] == {"verb": "separators", "separators": 6, "pairs": 42}
    assert records[-1]["min_count"] == 6 and records[-1]["passed"] is True


def test_verify_galois(capsys):
    code, records = run(capsys, "verify", "galois", "--group", '{"kind":"affine","q":5,"H":[1,4]}')
    assert code == 0
    assert records[0]["passed"] is True
    assert records[0]["subgroups"] == 8
    assert records[0]["partitions"] == 52


def test_bench_grover(capsys):
    code, records = run(capsys, "bench", "grover", "--q", "5", "--strategy", "scan")
    assert code == 0
    assert records[0]["mean"] == 3.0 == records[0]["scan_mean"]


def test_exit_code_usage_errors(capsys, monkeypatch):
    assert main(["--quiet", "solve", "hqpp"]) == 1
    assert main(["--quiet", "solve", "hqpp", "--q", "8"]) == 1
    assert main(["--quiet", "solve", "hpp2", "--q", "7", "--n", "7"]) == 1
    assert main(["--quiet", "solve", "hqpp", "--q", "7", "--trials", "0"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    monkeypatch.setenv("HSSP_LAB_SEED", "abc")
    assert main(["--quiet", "solve", "hqpp", "--q", "7"]) == 1


def test_exit_code_promise_violation(capsys):
    assert main(["--quiet", "solve", "hpp2", "--q", "5", "--hidden", '{"terms":[]}']) == 2


def test_exit_code_verification_failure(capsys):
    code, records = run(capsys, "base", "verify", "--group", AFF7_PM1, "--points", "[0]")
    assert code == 3
    assert records[0]["verified"] is False


def test_pretty_prints_a_table(capsys):
    assert main(["--quiet", "--pretty", "solve", "hqpp", "--q", "5", "--hidden", '{"u":1}']) == 0
    out = capsys.readouterr().out
    assert "correct" in out.splitlines()[0]


def test_solve_grover_scrambled(capsys):
    code, records = run(capsys, "solve", "grover", "--q", "5", "--hidden", '{"c":4}', "--path", "both", "--scramble")
    assert code == 0
    assert records[0]["paths"] == {"A": 4, "B": 4}
    assert records[0]["correct"] is True


SCRAMBLE_CASES = [
    (("solve", "hqpp", "--q", "7", "--hidden", '{"u":3}', "--path", "both"), ("u", "paths")),
    (("solve", "hpp2", "--q", "5", "--seed", "4"), ("vector",)),
    (("solve", "hpp2", "--q", "5", "--n", "3", "--seed", "2"), ("vector",)),
    (("solve", "hpgp", "--q", "5", "--hidden", '{"terms":[{"exp":[2],"coef":3},{"exp":[1],"coef":1}]}', "--path", "both"), ("terms",)),
    (("solve", "hpgp", "--q", "5", "--n", "2", "--d", "2", "--seed", "3"), ("terms", "solves")),
    (("solve", "grover", "--q", "7", "--hidden", '{"c":0}', "--path", "both"), ("c", "paths", "queries")),
    (("solve", "grover", "--q", "7", "--seed", "6", "--strategy", "random"), ("c", "queries")),
    (("solve", "zpmzp", "--p", "3", "--hidden", '{"v":[1,2],"y0":[2,0]}'), ("v", "d", "coordinate_polys")),
    (("solve", "zpmzp", "--p", "2", "--hidden", '{"v":[1,0]}'), ("v", "d", "coordinate_polys")),
]


@pytest.mark.parametrize("argv, keys", SCRAMBLE_CASES)
def test_scrambled_labels_change_no_answer(capsys, argv, keys):
    code, plain = run(capsys, *argv)
    assert code == 0
    code, scrambled = run(capsys, *argv, "--scramble")
    assert code == 0
    assert scrambled[0]["correct"] is True
    assert {k: scrambled[0][k] for k in keys} == {k: plain[0][k] for k in keys}
