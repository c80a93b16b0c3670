import json
import subprocess
import sys

import pytest

from orientham.cli import main


def run(args):
    return main([str(a) for a in args])


def load(path):
    return json.loads(path.read_text())


@pytest.fixture
def extremal9(tmp_path):
    path = tmp_path / "g9.json"
    assert run(["gen-extremal", "--n", 9, "--seed", 1, "--out", path]) == 0
    return path


def test_gen_then_solve_chain(extremal9, tmp_path):
    out = tmp_path / "solve.json"
    code = run(["solve", "--graph", extremal9, "--pattern", "+" * 9, "--out", out])
    report = load(out)
    assert code in (0, 1)
    assert code == (0 if report["result"]["verdict"] == "found" else 1)
    assert report["config"]["pattern"] == "+" * 9


def test_two_cycle_exits_3_and_names_pair(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [1, 0]]}))
    assert run(["solve", "--graph", bad, "--pattern", "+++"]) == 3
    err = capsys.readouterr().err
    assert "2-cycle" in err and "0" in err and "1" in err


def test_malformed_json_exits_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["solve", "--graph", bad, "--pattern", "+++"]) == 3


def test_missing_seed_exits_3():
    with pytest.raises(SystemExit) as info:
        run(["gen-random", "--n", 8, "--min-semidegree", 3])
    assert info.value.code == 3


def test_unknown_subcommand_exits_3():
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"])
    assert info.value.code == 3


def test_sweep_on_triangle(tmp_path):
    g = tmp_path / "tri.json"
    g.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]}))
    out = tmp_path / "sweep.json"
    assert run(["sweep", "--graph", g, "--tmin", 3, "--tmax", 3, "--out", out]) == 1
    cells = {c["pattern"]: c["verdict"] for c in load(out)["result"]["cells"]}
    assert cells == {"+++": "found", "++-": "none"}


def test_reports_are_byte_identical_apart_from_timestamp(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["gen-random", "--n", 10, "--min-semidegree", 3, "--seed", 5, "--out", out]) == 0
    strip = lambda p: [line for line in p.read_text().splitlines() if '"generated_at"' not in line]
    assert strip(a) == strip(b)
    assert load(a)["seed"] == 5 and load(a)["config"]["min_semidegree"] == 3


def test_thread_count_does_not_change_results(extremal9, tmp_path):
    outs = []
    for threads in (1, 3):
        out = tmp_path / f"sweep{threads}.json"
        run(["--threads", threads, "sweep", "--graph", extremal9, "--tmax", 6, "--out", out])
        outs.append(load(out)["result"])
    assert outs[0] == outs[1]


def test_refuses_overwrite(extremal9, tmp_path):
    out = tmp_path / "s.json"
    assert run(["solve", "--graph", extremal9, "--pattern", "+++", "--out", out]) == 0
    before = out.read_text()
    assert run(["solve", "--graph", extremal9, "--pattern", "+++", "--out", out]) == 3
    assert out.read_text() == before
    assert run(["solve", "--graph", extremal9, "--pattern", "+++", "--out", extremal9]) == 3
    assert run(["solve", "--graph", extremal9, "--pattern", "+++", "--out", out, "--force"]) == 0


def test_out_dir_env(extremal9, tmp_path, monkeypatch):
    monkeypatch.setenv("ORIENTHAM_OUT_DIR", str(tmp_path / "reports"))
    assert run(["special-edges", "--graph", extremal9]) == 0
    report = load(tmp_path / "reports" / "special-edges.json")
    assert report["result"]["special_edges"] == []


def test_tsv_and_dot(tmp_path, capsys):
    assert run(["gen-extremal", "--n", 9, "--n-max", 16, "--seed", 0, "--format", "tsv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split("\t") == ["n", "delta0", "|W|", "|X|=|Z|", "|Y|"]
    assert lines[1].split("\t") == ["9", "3", "2", "3", "1"]
    assert len(lines) == 9
    assert run(["gen-extremal", "--n", 8, "--seed", 0, "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_oracle_and_expander_and_partition(tmp_path):
    g16 = tmp_path / "g16.json"
    run(["gen-extremal", "--n", 16, "--seed", 0, "--out", g16])
    assert run(["check-expander", "--graph", g16, "--nu", 0.1, "--tau", 0.2, "--out", tmp_path / "e.json"]) == 1
    assert load(tmp_path / "e.json")["result"]["witness"]
    assert run(["check-partition", "--graph", g16, "--delta", 0.1, "--C", 3, "--out", tmp_path / "p.json"]) == 0
    g8 = tmp_path / "g8.json"
    run(["gen-extremal", "--n", 8, "--seed", 0, "--out", g8])
    assert run(["oracle", "--graph", g8, "--pattern", "+-+-+-+-", "--out", tmp_path / "o.json"]) == 1


def test_capacity_exits_2(tmp_path):
    g = tmp_path / "g30.json"
    run(["gen-extremal", "--n", 30, "--seed", 0, "--out", g])
    assert run(["check-expander", "--graph", g, "--nu", 0.1, "--tau", 0.2]) == 2


def test_indeterminate_exits_2(tmp_path):
    g = tmp_path / "g10.json"
    run(["gen-extremal", "--n", 10, "--seed", 0, "--out", g])
    assert run(["solve", "--graph", g, "--pattern", "+-" * 5, "--budget", 3, "--out", tmp_path / "s.json"]) == 2


def test_proper_path_and_balanced_system(tmp_path):
    from orientham.extremal import build_extremal

    inst = build_extremal(40, seed=3)
    x, y = min(inst.partition.X), min(inst.partition.Y)
    g = inst.graph.with_edges(add=[(y, x)], remove=[(x, y)])
    path = tmp_path / "planted.json"
    path.write_text(json.dumps({"graph": g.to_json(), "partition": inst.partition.to_json()}))
    assert run(["proper-path", "--graph", path, "--edge", f"{y},{x}", "--out", tmp_path / "pp.json"]) == 0
    assert len(load(tmp_path / "pp.json")["result"]["vertices"]) == 13
    forbidden = ",".join(str(w) for w in sorted(inst.partition.W)[2:])
    assert run(["proper-path", "--graph", path, "--edge", f"{y},{x}", "--forbidden", forbidden, "--out", tmp_path / "pf.json"]) == 1
    assert run(["balanced-system", "--graph", path, "--out", tmp_path / "bs.json"]) == 0


def test_wind_sim_and_threshold(tmp_path):
    out = tmp_path / "w.json"
    assert run(["wind-sim", "--k", 8, "--paths", "1000x10", "--eps", 0.05, "--trials", 200, "--seed", 7, "--out", out]) == 0
    assert load(out)["result"]["fraction_within"] >= 0.95
    out = tmp_path / "t.json"
    assert run(["threshold-exp", "--n", 7, "--trials", 3, "--seed", 2, "--out", out]) == 0
    assert load(out)["result"]["summary"]["label"] == "verified by oracle"


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "orientham.cli", "gen-extremal", "--n", "9", "--seed", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["table_row"]["delta0"] == 3
