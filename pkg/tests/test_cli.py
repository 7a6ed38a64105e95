import json

import pytest

from pfcond import identities as ids
from pfcond.cli import main
from pfcond.graph import format_graph, grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_pf_four_by_four(tmp_path, capsys):
    # only a12 = 1 and a34 = 3 are nonzero, so Pf = a12 a34
    f = write(tmp_path, "a.txt", "4\n0 1 0 0\n-1 0 0 0\n0 0 0 3\n0 0 -3 0\n")
    code, out, _ = run(capsys, "pf", f)
    assert code == 0
    assert out.splitlines() == ["Pf = 3, det = 9", "Cayley check: Pf^2 = det"]


def test_pf_odd_order_is_zero(tmp_path, capsys):
    f = write(tmp_path, "odd.txt", "3\n0 1 2\n-1 0 3\n-2 -3 0\n")
    code, out, _ = run(capsys, "pf", f)
    assert code == 0 and out.startswith("Pf = 0, det = 0")


def test_pf_rational_entries(tmp_path, capsys):
    f = write(tmp_path, "r.txt", "2\n0 1/2\n-1/2 0\n")
    code, out, _ = run(capsys, "pf", f)
    assert code == 0 and out.splitlines()[0] == "Pf = 1/2, det = 1/4"


@pytest.mark.parametrize("text", ["2\n0 1\n1 0\n", "2\n0 x\n0 0\n", "3\n0 1\n"])
def test_pf_bad_input(tmp_path, capsys, text):
    code, _, err = run(capsys, "pf", write(tmp_path, "bad.txt", text))
    assert code == 2 and "error" in err


def test_pf_missing_file(capsys):
    code, _, _ = run(capsys, "pf", "/nonexistent/matrix.txt")
    assert code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "thm31", "--trials", "200", "--seed", "42")
    assert code == 0
    assert out.splitlines()[-1] == "PASS 200/200 residuals zero"
    code, out, _ = run(capsys, "verify", "edge_condensation", "--n", "16", "--k", "2", "--trials", "30", "--seed", "7")
    assert code == 0 and "n=16 k=2" in out


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "verify", "thm31", "--n", "5")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_verify_failure_and_replay(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(ids, "_f_factor", lambda *a: -ids._sign_pair(a[0], a[1], a[4]) * ids._sign_pair(a[0], a[2], a[3]))
    out_file = tmp_path / "cex.json"
    code, out, _ = run(capsys, "verify", "thm31", "--trials", "50", "--seed", "1", "--out", str(out_file))
    assert code == 1 and "FAIL at trial" in out
    body = json.loads(out_file.read_text())
    assert body["identity"] == "thm31"
    code, out, _ = run(capsys, "verify", "--replay", str(out_file))
    assert code == 1 and out.splitlines()[-1] == "FAIL"
    monkeypatch.undo()
    code, out, _ = run(capsys, "verify", "--replay", str(out_file))
    assert code == 0 and out.splitlines()[-1] == "PASS"


def test_verify_prints_counterexample_without_out(capsys, monkeypatch):
    original = ids._parity_factor
    monkeypatch.setattr(ids, "_parity_factor", lambda *a: -original(*a))
    code, out, _ = run(capsys, "verify", "thm42", "--trials", "50", "--seed", "3")
    assert code == 1
    text = out.split("counterexample:\n", 1)[1]
    assert json.loads(text)["identity"] == "thm42"


def test_replay_bad_file(tmp_path, capsys):
    assert run(capsys, "verify", "--replay", write(tmp_path, "x.json", "{not json"))[0] == 2


def test_verify_jobs_output_identical(capsys):
    args = ["verify", "kenyon", "--trials", "24", "--seed", "5"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "3")
    assert serial == parallel


def test_count_grid_all_methods(capsys):
    code, out, _ = run(capsys, "count", "--grid", "4", "4")
    assert code == 0
    assert out.splitlines() == ["oracle: 36", "pfaffian: 36", "condense: 36"]


def test_count_json_and_aztec(capsys):
    code, out, _ = run(capsys, "count", "--aztec", "3", "--format", "json")
    assert code == 0 and json.loads(out) == {"condense": "64", "oracle": "64", "pfaffian": "64"}


def test_count_file(tmp_path, capsys):
    f = write(tmp_path, "g.txt", format_graph(grid(3, 4, weight="1/2")))
    code, out, _ = run(capsys, "count", f, "--method", "pfaffian")
    assert code == 0 and out.strip() == "pfaffian: 11/64"


def test_count_oracle_too_large(capsys):
    code, _, err = run(capsys, "count", "--grid", "6", "6", "--method", "oracle")
    assert code == 2 and "24" in err


def test_count_skips_oracle_when_large(capsys):
    code, out, err = run(capsys, "count", "--grid", "2", "14", "--method", "all")
    assert code == 0 and "oracle" not in out and "skipped" in err


def test_count_bad_graph(tmp_path, capsys):
    assert run(capsys, "count", write(tmp_path, "g.txt", "v 2\ne 1 5 1\n"))[0] == 2
    assert run(capsys, "count")[0] == 2


def test_bench_aztec(capsys):
    code, out, _ = run(capsys, "bench", "--family", "aztec", "--max-size", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "family,size,method,wall_time_ns,count"
    rows = [line.split(",") for line in lines[1:]]
    assert {(r[1], r[4]) for r in rows} == {("1", "2"), ("2", "8"), ("3", "64")}
    assert all(int(r[3]) >= 0 for r in rows)
    assert {r[2] for r in rows} == {"oracle", "pfaffian", "condense"}


def test_bench_grid_and_empty(capsys):
    code, out, _ = run(capsys, "bench", "--family", "grid", "--max-size", "4")
    assert code == 0 and [r.split(",")[4] for r in out.splitlines()[1:]] == ["2"] * 3 + ["36"] * 3
    code, out, _ = run(capsys, "bench", "--family", "grid", "--max-size", "0")
    assert code == 0 and out.splitlines() == ["family,size,method,wall_time_ns,count"]
    assert run(capsys, "bench", "--family", "hex", "--max-size", "2")[0] == 2


def test_verify_fixed_shape_campaign(capsys):
    code, out, _ = run(capsys, "verify", "thm31", "--n", "8", "--k", "3", "--trials", "1000", "--seed", "42")
    assert code == 0 and out.splitlines()[-1] == "PASS 1000/1000 residuals zero"


def test_count_small_examples(capsys):
    assert run(capsys, "count", "--grid", "2", "1", "--method", "oracle")[1] == "oracle: 1\n"
    assert run(capsys, "count", "--aztec", "2", "--method", "pfaffian")[1] == "pfaffian: 8\n"


def test_bench_grid_counts_are_monotone(capsys):
    code, out, _ = run(capsys, "bench", "--family", "grid", "--max-size", "6")
    rows = [r.split(",") for r in out.splitlines()[1:]]
    pf = [int(r[4]) for r in rows if r[2] == "pfaffian"]
    assert code == 0 and pf == sorted(pf) and pf[-1] == 6728
    assert {r[4] for r in rows if r[1] == "6"} == {"6728"}
