import io
import json
import subprocess
import sys

import pytest

from sdforge.catalog import data_path
from sdforge.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_list_constructions():
    code, out = run("list-constructions")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 28
    assert lines[0].split("\t")[:2] == ["G1.1", "𝒢₁¹"]
    assert lines[-1].split("\t")[:2] == ["G8.3", "𝒢₈³"]
    code, out = run("list-constructions", "--json")
    assert json.loads(out.splitlines()[5])["id"] == "G2.4"


def test_analyze_matrix_file(tmp_path):
    f = tmp_path / "ii.txt"
    f.write_text("\n".join(("0" * i + "1" + "0" * (35 - i)) * 2 for i in range(36)) + "\n")
    code, out = run("analyze", "--matrix", str(f))
    rep = json.loads(out)
    assert code == 0
    assert rep["self_dual"] is True and rep["min_distance"] == 2


def test_analyze_construction_candidate():
    code, out = run("analyze", "--construction", "G1.1", "--candidate", "010111110111010000101111010010111010")
    rep = json.loads(out)
    assert code == 0
    assert (rep["family"], rep["gamma"], rep["beta"], rep["min_distance"]) == ("W72_1", 0, 129, 12)
    assert rep["candidate"] == format(int("010111110111010000101111010010111010", 2), "09x")


def test_analyze_usage_errors(tmp_path):
    assert run("analyze")[0] == 2
    assert run("analyze", "--construction", "G9.9", "--candidate", "0")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("0101\n01\n")
    assert run("analyze", "--matrix", str(bad))[0] == 2
    assert run("analyze", "--matrix", str(tmp_path / "nope.txt"))[0] == 3


def test_verify_tables_perturbed_row_fails(tmp_path):
    text = data_path("published_tables.csv").read_text()
    lines = text.splitlines()
    header, c1 = lines[0], lines[1]
    assert c1.startswith("C1,")
    f = tmp_path / "t.csv"
    f.write_text(header + "\n" + c1.replace(",0,129,", ",0,130,") + "\n")
    code, out = run("verify-tables", "--tables", str(f))
    assert code == 1
    assert out.splitlines()[0].startswith("FAIL C1")
    assert out.splitlines()[-1] == "0/1 PASS"
    f.write_text(header + "\n" + c1 + "\n")
    code, out = run("verify-tables", "--tables", str(f))
    assert code == 0 and out.splitlines()[-1] == "1/1 PASS"


def test_verify_tables_empty_and_missing(tmp_path, capsys):
    f = tmp_path / "empty.csv"
    f.write_text("")
    code, out = run("verify-tables", "--tables", str(f))
    assert code == 0 and out.strip() == "0/0 PASS"
    assert "warning" in capsys.readouterr().err
    assert run("verify-tables", "--tables", str(tmp_path / "missing.csv"))[0] == 3


def test_verify_tables_parse_error_is_usage(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("id,construction,r_bits,type,gamma,beta,alpha,aut_order\nC1,G1.1,01,W72_1,0,1,,\n")
    assert run("verify-tables", "--tables", str(f))[0] == 2


def test_unknown_flag_and_help(capsys):
    assert run("verify-tables", "--bogus")[0] == 2
    assert run("no-such-command")[0] == 2
    for sub in ("list-constructions", "analyze", "verify-tables", "search", "compare"):
        assert run(sub, "--help")[0] == 0
    assert "9 hex digits" in capsys.readouterr().out


def test_search_is_deterministic(tmp_path):
    args = ["search", "--construction", "G2.1", "--algo", "voa", "--seed", "7", "--pop", "30", "--iters", "3", "--strong-count", "3", "--no-timestamp"]
    a, b = run(*args), run(*args)
    assert a == b and a[0] == 0
    d = json.loads(a[1])
    assert d["config"]["seed"] == 7 and "wall_time" not in d
    code, out = run("search", "--construction", "G2.1", "--algo", "ga", "--pop", "20", "--iters", "2", "--tournament-size", "2")
    assert code == 0 and json.loads(out)["config"]["tournament_size"] == 2


def test_search_bad_config_is_usage():
    assert run("search", "--construction", "G2.1", "--pop", "1")[0] == 2
    assert run("search", "--construction", "G2.1", "--algo", "sa")[0] == 2


def test_threads_env_fallback(monkeypatch):
    args = ["search", "--construction", "G8.1", "--pop", "20", "--iters", "2", "--strong-count", "2", "--no-timestamp"]
    base = run(*args)
    monkeypatch.setenv("SDFORGE_THREADS", "3")
    assert run(*args) == base
    monkeypatch.setenv("SDFORGE_THREADS", "many")
    assert run(*args)[0] == 2


def test_compare_out_unwritable(tmp_path):
    code, _ = run("compare", "--constructions", "G6.1", "--algos", "voa", "--pop", "10", "--iters", "0", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 3


def test_compare_csv(tmp_path):
    out_file = tmp_path / "cmp.csv"
    code, out = run("compare", "--constructions", "G6.1,G7.2,G8.1", "--algos", "voa,ga", "--pop", "16", "--iters", "1", "--out", str(out_file))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "construction,algorithm,runs,distinct_hits,total_hits,evaluations"
    assert len(lines) == 7
    assert out_file.read_text() == out
    assert run("compare", "--algos", "sa")[0] == 2
    assert run("compare", "--runs", "0")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sdforge", "list-constructions"], capture_output=True, text=True)
    assert r.returncode == 0 and len(r.stdout.splitlines()) == 28
