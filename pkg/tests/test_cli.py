from __future__ import annotations

import json
import re

import pytest

from satkit.cli import dispatch, main
from satkit.supergraph import format_instance, plg

GRAPH = "4 4\n0 1\n1 2\n2 3\n0 3\n0 3\n"
NO_PATH = "2 0\n0 1\n"
STEMMA = "digraph tradition {\n A -> B;\n A -> C;\n B -> D;\n C -> E;\n C -> F;\n}\n"
FEATURES = (
    '[{"D": "alpha", "E": "beta"},'
    ' {"B": "alpha", "E": "alpha", "D": "beta", "F": "beta"},'
    ' {"A": "alpha", "D": "alpha", "F": "alpha"}]'
)
SAMPLE = "5 2\n1 1 a\n1 4 a b a a\n1 2 b b\n0 3 a b b\n0 1 b\n"


def mcs_instance():
    names = ("n1", "n2", "n3", "n4", "u1", "u2", "u3")
    labels = {0: "n1", 3: "n3", 4: "n4", 6: "n2"}
    g1 = plg(range(7), [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6)], labels)
    g2 = plg(range(7), [(0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6)], labels)
    return format_instance((g1, g2), names)


def canonical_json(path):
    raw = path.read_text()
    assert json.dumps(json.loads(raw), indent=2, sort_keys=True) + "\n" == raw
    return json.loads(raw)


def test_shortest_path_default_variant(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(GRAPH)
    assert dispatch(["shortest-path", str(g)]) == 0
    assert capsys.readouterr().out == "variant 3: length 1\n"


def test_shortest_path_all_variants_with_report(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(GRAPH)
    report = tmp_path / "out.json"
    assert dispatch(["shortest-path", str(g), "--variant", "all",
                     "--json", str(report)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == [f"variant {v}: length 1" for v in (1, 2, 3, 4)]
    data = canonical_json(report)
    assert data["kind"] == "shortest-path"
    assert [r["variant"] for r in data["records"]] == [1, 2, 3, 4]
    for r in data["records"]:
        assert r["length"] == 1
        assert r["edges"] == [[0, 3]]
        assert r["clauses"] > 0


def test_shortest_path_infeasible_exits_one(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(NO_PATH)
    assert dispatch(["shortest-path", str(g)]) == 1
    assert "no path from 0 to 1" in capsys.readouterr().out


def test_shortest_path_bad_file_exits_two(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("2 oops\n")
    assert dispatch(["shortest-path", str(g)]) == 2
    err = capsys.readouterr().err
    assert err.startswith(f"{g}:1:")


def test_missing_file_exits_two(tmp_path, capsys):
    path = tmp_path / "absent.txt"
    assert dispatch(["shortest-path", str(path)]) == 2
    err = capsys.readouterr().err
    assert str(path) in err and "Traceback" not in err


def test_usage_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as e:
        dispatch(["no-such-command"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        dispatch([])
    with pytest.raises(SystemExit):
        dispatch(["stemma"])  # mode is required


def test_stemma_check(tmp_path, capsys):
    dot = tmp_path / "t.dot"
    dot.write_text(STEMMA)
    feats = tmp_path / "f.json"
    feats.write_text(FEATURES)
    report = tmp_path / "r.json"
    assert dispatch(["stemma", "check", str(dot), str(feats),
                     "--json", str(report)]) == 0
    out = capsys.readouterr().out
    assert re.fullmatch(r"Found 2 positive out of 3 groupings in \d+ sec\.\n", out)
    data = canonical_json(report)
    assert [r["consistent"] for r in data["records"]] == [True, False, True]
    assert data["summary"] == {"positive": 2, "total": 3}
    assert "coloring" in data["records"][0]
    assert "coloring" not in data["records"][1]


def test_stemma_check_parallel_matches_serial(tmp_path, capsys):
    dot = tmp_path / "t.dot"
    dot.write_text(STEMMA)
    feats = tmp_path / "f.json"
    feats.write_text(FEATURES)
    assert dispatch(["stemma", "check", str(dot), str(feats)]) == 0
    serial = capsys.readouterr().out
    assert dispatch(["stemma", "check", str(dot), str(feats), "--jobs", "2"]) == 0
    assert capsys.readouterr().out == serial


def test_stemma_min_sources(tmp_path, capsys):
    dot = tmp_path / "t.dot"
    dot.write_text(STEMMA)
    feats = tmp_path / "f.json"
    feats.write_text(FEATURES)
    report = tmp_path / "r.json"
    assert dispatch(["stemma", "min-sources", str(dot), str(feats),
                     "--json", str(report)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("feature 0: 2 sources (")
    assert lines[1].startswith("feature 1: 3 sources (")
    assert lines[2].startswith("feature 2: 1 sources (")
    assert re.fullmatch(r"Minimized 3 groupings in \d+ sec\.", lines[3])
    data = canonical_json(report)
    assert [r["k_min"] for r in data["records"]] == [2, 3, 1]
    assert all(r["optimal"] for r in data["records"])
    assert len(data["records"][1]["origins"]) == 3


def test_stemma_bad_features_exit_two(tmp_path, capsys):
    dot = tmp_path / "t.dot"
    dot.write_text(STEMMA)
    feats = tmp_path / "f.json"
    feats.write_text('[{"Z": "alpha"}]')   # unknown manuscript
    assert dispatch(["stemma", "check", str(dot), str(feats)]) == 2
    assert "unknown manuscript" in capsys.readouterr().err


def test_mcs_exact_and_greedy(tmp_path, capsys):
    inst = tmp_path / "two.json"
    inst.write_text(mcs_instance())
    report = tmp_path / "r.json"
    assert dispatch(["mcs", "exact", str(inst), "--json", str(report)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "exact supergraph: 7 arcs (optimal)"
    assert len(lines) == 8 and all(" -- " in l for l in lines[1:])
    data = canonical_json(report)
    assert data["arc_count"] == 7 and data["optimal"]
    assert len(data["family"]) == 2

    assert dispatch(["mcs", "greedy", str(inst)]) == 0
    head = capsys.readouterr().out.splitlines()[0]
    m = re.fullmatch(r"greedy supergraph: (\d+) arcs \(optimal\)", head)
    assert m and int(m.group(1)) >= 7


def test_mcs_expired_budget_exits_one(tmp_path, capsys):
    inst = tmp_path / "two.json"
    inst.write_text(mcs_instance())
    assert dispatch(["mcs", "exact", str(inst), "--time-budget", "1e-9"]) == 1
    err = capsys.readouterr().err
    assert "budget" in err and "Traceback" not in err


def test_dfa_learn(tmp_path, capsys):
    smp = tmp_path / "s.abba"
    smp.write_text(SAMPLE)
    report = tmp_path / "r.json"
    dot = tmp_path / "d.dot"
    assert dispatch(["dfa", "learn", str(smp), "--emit-dot", str(dot),
                     "--json", str(report)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("3 states, ")
    assert dot.read_text().startswith("digraph")
    data = canonical_json(report)
    assert data["states"] == 3
    assert data["clique"] == [0, 1, 2]
    assert all(len(t) == 3 for t in data["transitions"])


def test_dfa_learn_dot_to_stdout(tmp_path, capsys):
    smp = tmp_path / "s.abba"
    smp.write_text(SAMPLE)
    assert dispatch(["dfa", "learn", str(smp), "--emit-dot"]) == 0
    out = capsys.readouterr().out
    assert "digraph" in out and "doublecircle" in out


def test_dfa_learn_transitions_objective(tmp_path, capsys):
    smp = tmp_path / "s.abba"
    smp.write_text(SAMPLE)
    assert dispatch(["dfa", "learn", str(smp),
                     "--objective", "transitions"]) == 0
    m = re.match(r"3 states, (\d+) transitions", capsys.readouterr().out)
    assert m and int(m.group(1)) <= 6


def test_dfa_learn_with_color_directives(tmp_path, capsys):
    smp = tmp_path / "s.abba"
    smp.write_text("5 2\ncolor 0 0\ncolor 1 1 a\ncolor 2 1 b\n" +
                   SAMPLE.split("\n", 1)[1])
    report = tmp_path / "r.json"
    assert dispatch(["dfa", "learn", str(smp), "--json", str(report)]) == 0
    assert capsys.readouterr().out.startswith("3 states, ")
    assert canonical_json(report)["clique"] == []


def test_dfa_bad_sample_exits_two(tmp_path, capsys):
    smp = tmp_path / "s.abba"
    smp.write_text("2 2\n1 1 a\n")
    assert dispatch(["dfa", "learn", str(smp)]) == 2
    assert "declares 2 strings" in capsys.readouterr().err


def test_bench_csv_is_deterministic(tmp_path, capsys):
    outs = []
    for jobs, name in (("1", "a.csv"), ("1", "b.csv"), ("3", "c.csv")):
        path = tmp_path / name
        assert dispatch(["bench", "shortest-path", "--sizes", "6,8",
                         "--no-times", "--jobs", jobs, "--csv", str(path)]) == 0
        capsys.readouterr()
        outs.append(path.read_text())
    assert outs[0] == outs[1] == outs[2]
    lines = outs[0].splitlines()
    assert lines[0] == "n,variant,vars,clauses,encode_ms,solve_ms"
    assert len(lines) == 1 + 2 * 4
    assert all(l.endswith(",0.0,0.0") for l in lines[1:])


def test_bench_stdout_and_seed_env(tmp_path, capsys, monkeypatch):
    assert dispatch(["bench", "shortest-path", "--sizes", "6",
                     "--seed", "7", "--no-times"]) == 0
    flagged = capsys.readouterr().out
    monkeypatch.setenv("SATKIT_SEED", "7")
    assert dispatch(["bench", "shortest-path", "--sizes", "6",
                     "--no-times"]) == 0
    assert capsys.readouterr().out == flagged


def test_bench_rejects_bad_sizes(capsys):
    assert dispatch(["bench", "shortest-path", "--sizes", "12,8"]) == 2
    assert "ascending" in capsys.readouterr().err
    assert dispatch(["bench", "shortest-path", "--sizes", "a,b"]) == 2
    assert "bad --sizes" in capsys.readouterr().err


def test_bench_plot(tmp_path, capsys):
    png = tmp_path / "bench.png"
    assert dispatch(["bench", "shortest-path", "--sizes", "4,6",
                     "--no-times", "--plot", str(png)]) == 0
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_main_uses_argv(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(GRAPH)
    assert main(["shortest-path", str(g), "--variant", "1"]) == 0
    assert capsys.readouterr().out == "variant 1: length 1\n"
