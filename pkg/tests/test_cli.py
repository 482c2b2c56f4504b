import csv
import subprocess
import sys

import numpy as np
import pytest

from unionde.cli import CSV_HEADER, main, read_config_file, run_seed

FAST = ["--max-evals", "300", "--np", "10", "--dim", "3", "--jobs", "1", "--quiet"]


def write_rows(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        w.writerows(rows)


def test_run_row_accounting(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--strategies", "ude", "--functions", "sphere", "--runs", "3", "--out", str(out), *FAST]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "function,strategy,run_index,seed,final_error,evals_used"
    assert len(lines) == 4
    assert [l.split(",")[2] for l in lines[1:]] == ["0", "1", "2"]
    assert all(l.endswith(",300") for l in lines[1:])


def test_run_is_byte_identical(tmp_path):
    args = ["run", "--strategies", "rand2,ude", "--functions", "ackley,sphere", "--runs", "2", *FAST]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_parallel_matches_serial(tmp_path):
    args = ["run", "--strategies", "derl2", "--functions", "griewank", "--runs", "3",
            "--max-evals", "300", "--np", "10", "--dim", "3", "--quiet"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--jobs", "1", "--out", str(a)])
    main(args + ["--jobs", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_adding_a_strategy_keeps_existing_rows(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--strategies", "ude", "--functions", "sphere", "--runs", "2", "--out", str(a), *FAST])
    main(["run", "--strategies", "ude,rand1", "--functions", "sphere,ackley", "--runs", "2", "--out", str(b), *FAST])
    old = set(a.read_text().splitlines())
    assert old <= set(b.read_text().splitlines())


def test_seed_schedule_is_stable():
    assert run_seed(0, "ude", "sphere", 0) == run_seed(0, "ude", "sphere", 0)
    assert len({run_seed(0, "ude", "sphere", r) for r in range(100)}) == 100
    assert run_seed(0, "ude", "sphere", 0) != run_seed(1, "ude", "sphere", 0)
    assert 0 <= run_seed(5, "rand2", "ackley", 3) < 2**64


def test_unknown_strategy(capsys):
    assert main(["run", "--strategies", "ude2", *FAST]) != 0
    err = capsys.readouterr().err
    assert "ude2" in err and "rand1" in err and "proximity2" in err


def test_unknown_function(capsys):
    assert main(["run", "--functions", "cigar", *FAST]) != 0
    assert "sphere" in capsys.readouterr().err


def test_unwritable_output(tmp_path, capsys):
    assert main(["run", "--out", str(tmp_path / "nope" / "r.csv"), *FAST]) != 0


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.conf"
    cfg.write_text(
        "# campaign\nstrategies = ude\nstrategy = rand2\nfunctions = sphere, ackley\n"
        "runs = 4\nnp = 10\ndim = 3\nmax_evals = 200\nseed = 9\njobs = 1\n"
    )
    values = read_config_file(cfg)
    assert values["strategies"] == ["ude", "rand2"]
    assert values["functions"] == ["sphere", "ackley"]
    out = tmp_path / "r.csv"
    assert main(["run", "--config", str(cfg), "--runs", "1", "--out", str(out), "--quiet"]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2 * 1


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.conf"
    cfg.write_text("colour = blue\n")
    assert main(["run", "--config", str(cfg)]) != 0
    assert "colour" in capsys.readouterr().err


def test_table_shape_and_footer(tmp_path, capsys):
    p = tmp_path / "r.csv"
    write_rows(p, [
        ("f1", "rand2", 0, 1, "2.0", 10), ("f1", "rand2", 1, 2, "4.0", 10),
        ("f1", "ude", 0, 3, "1.0", 10), ("f1", "ude", 1, 4, "1.0", 10),
        ("f2", "rand2", 0, 5, "5.0", 10), ("f2", "ude", 0, 6, "0.5", 10),
    ])
    assert main(["table", str(p), "--reference", "ude"]) == 0
    out = capsys.readouterr().out.splitlines()
    body = [l for l in out if l.startswith("f")]
    assert len(body) == 2
    assert all(l.count("*") == 1 for l in body)
    assert "Win: 2 lose: 0 tie: 0" in out[-1]


def test_table_identical_means_tie(tmp_path, capsys):
    p = tmp_path / "r.csv"
    write_rows(p, [("f1", "a", 0, 1, "1.5", 10), ("f1", "b", 0, 2, "1.5", 10)])
    assert main(["table", str(p), "--reference", "b"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert [l for l in out if l.startswith("f1")][0].count("*") == 2
    assert "Win: 0 lose: 0 tie: 1" in "\n".join(out)


def test_table_malformed(tmp_path, capsys):
    p = tmp_path / "r.csv"
    p.write_text("function,strategy\nf1,ude\n")
    assert main(["table", str(p)]) != 0
    p.write_text(",".join(CSV_HEADER) + "\nf1,ude,0,1,abc,10\n")
    assert main(["table", str(p)]) != 0


def test_compare_self(tmp_path, capsys):
    p = tmp_path / "r.csv"
    write_rows(p, [(f"f{i}", "ude", 0, i, str(i + 0.5), 10) for i in range(6)])
    assert main(["compare", str(p), "ude", "ude"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == ["Algorithm", "MR-", "MR+", "SR-", "SR+", "P-value", "Difference"]
    assert out[1].split()[-1] == "="
    assert "underpowered" in out[2]


def test_compare_b_dominates(tmp_path, capsys):
    p = tmp_path / "r.csv"
    rows = []
    for i in range(25):
        rows.append((f"f{i:02d}", "rand2", 0, i, repr(1.0 + i), 10))
        rows.append((f"f{i:02d}", "ude", 0, i, repr(0.5 + i * 0.9), 10))
    write_rows(p, rows)
    assert main(["compare", str(p), "rand2", "ude"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split()
    assert row[-1] == "+"
    assert float(row[-2]) < 0.001
    assert row[:3] == ["rand2", "Vs.", "ude"]


def test_compare_missing_strategy(tmp_path, capsys):
    p = tmp_path / "r.csv"
    write_rows(p, [("f1", "ude", 0, 1, "1.0", 10)])
    assert main(["compare", str(p), "ude", "derl2"]) != 0


def test_list(capsys):
    main(["list"])
    first = capsys.readouterr().out
    main(["list"])
    assert capsys.readouterr().out == first
    assert "ude" in first.split()
    sphere = [l for l in first.splitlines() if l.split() and l.split()[0] == "sphere"][0]
    assert "[-100, 100]" in sphere


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "unionde", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "rastrigin" in res.stdout
