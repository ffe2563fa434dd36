import json
import subprocess
import sys

import pytest

from netreplica.cli import main
from netreplica.io import read_csv, write_edgelist
from netreplica.metrics import EnsembleSummary, SCALAR_METRICS

from _graphs import complete, gnp


@pytest.fixture
def small_graph(tmp_path):
    p = tmp_path / "g.edges"
    g = gnp(80, 0.08, 1)
    lines = [f"n{u} n{v}" for u, v in g.edges()]
    p.write_text("# test graph\n" + "\n".join(lines) + "\n")
    return p


def run(argv):
    return main([str(a) for a in argv])


def tree_bytes(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_replicate_outputs_and_determinism(small_graph, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert run(["replicate", small_graph, "--count", 3, "--seed", 5, "--out", out, "--jobs", 1]) == 0
    names = sorted(p.name for p in out1.iterdir())
    assert "nodes.tsv" in names and "ensemble_summary.csv" in names
    assert sum(n.endswith(".edges") for n in names) == 3
    a, b = tree_bytes(out1), tree_bytes(out2)
    # meta echoes --out, which differs; compare everything else byte for byte
    for name in a:
        if name.endswith(".json"):
            ja, jb = json.loads(a[name]), json.loads(b[name])
            ja["meta"]["args"].pop("out"), jb["meta"]["args"].pop("out")
            assert ja == jb
        else:
            assert a[name] == b[name]
    report = json.loads((out1 / "replica_000.report.json").read_text())
    assert report["rng_seed"] == 5 and "metrics" in report and "wall_time" not in report
    assert report["meta"]["config"]["node_edit_rates"] == [0.08, 0.07]


def test_replicate_same_out_dir_byte_identical(small_graph, tmp_path):
    out = tmp_path / "x"
    run(["replicate", small_graph, "--count", 2, "--out", out, "--jobs", 1])
    first = tree_bytes(out)
    run(["replicate", small_graph, "--count", 2, "--out", out, "--jobs", 1])
    assert tree_bytes(out) == first


def test_replicate_count_zero_usage_error(small_graph, tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["replicate", small_graph, "--count", 0, "--out", tmp_path / "o"])
    assert exc.value.code == 2


def test_malformed_edgelist_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.edges"
    p.write_text("1 2\n2 3 4 5\n")
    assert run(["metrics", p]) == 3
    assert ":2:" in capsys.readouterr().err


def test_invalid_config_names_field(small_graph, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"edge_edit_rates": [0.1, 2.0]}))
    assert run(["replicate", small_graph, "--config", cfg, "--out", tmp_path / "o"]) == 2
    assert "edge_edit_rates" in capsys.readouterr().err


def test_metrics_triangle(tmp_path):
    p = tmp_path / "t.edges"
    p.write_text("a b\nb c\nc a\n")
    out = tmp_path / "m.json"
    assert run(["metrics", p, "--out", out]) == 0
    body = json.loads(out.read_text())
    assert body["clustering"] == 1.0
    assert body["meta"]["command"] == "metrics"


def test_baseline_er(tmp_path):
    out = tmp_path / "er.edges"
    assert run(["baseline", "er", "--n", 300, "--p", 0.05, "--out", out]) == 0
    rows = [l.split() for l in out.read_text().splitlines()]
    assert all(len(r) == 2 and all(t.isdigit() for t in r) for r in rows)
    assert 1800 < len(rows) < 2700
    meta = json.loads((tmp_path / "er.edges.meta.json").read_text())
    assert meta["args"]["model"] == "er"


def test_baseline_needs_params(tmp_path):
    with pytest.raises(SystemExit):
        run(["baseline", "ba", "--n", 30, "--out", tmp_path / "x"])


def test_compare_schema(small_graph, tmp_path):
    out = tmp_path / "reps"
    run(["replicate", small_graph, "--count", 3, "--out", out, "--no-metrics", "--jobs", 1])
    prefix = tmp_path / "summary"
    assert run(["compare", small_graph, str(out / "replica_*.edges"), "--out", prefix]) == 0
    rows = read_csv(str(prefix) + ".csv")
    assert list(rows[0]) == EnsembleSummary.CSV_HEADER
    assert [r["metric"] for r in rows] == list(SCALAR_METRICS)


def test_compare_no_match(small_graph, tmp_path):
    with pytest.raises(SystemExit):
        run(["compare", small_graph, str(tmp_path / "nothing_*.edges")])


def test_epidemic_command(tmp_path):
    g = tmp_path / "g.edges"
    write_edgelist(gnp(60, 0.1, 2), g)
    out = tmp_path / "inc.csv"
    assert run(["epidemic", g, "--runs", 20, "--horizon", 30, "--out", out]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["day", "mean", "std"] and len(rows) == 30
    meta = json.loads((tmp_path / "inc.csv.meta.json").read_text())
    assert meta["params"]["horizon_days"] == 30


def test_evolve_command(small_graph, tmp_path):
    out = tmp_path / "ev"
    assert run(["evolve", small_graph, "--steps", 3, "--rate-scale", 0.1, "--out", out]) == 0
    rows = read_csv(out / "trajectory.csv")
    assert [r["step"] for r in rows] == ["0", "1", "2", "3"]
    assert rows[0]["num_nodes"] == "80"
    assert (out / "step_003.edges").exists()


def test_module_entry_point(tmp_path):
    p = tmp_path / "k4.edges"
    write_edgelist(complete(4), p)
    res = subprocess.run([sys.executable, "-m", "netreplica", "metrics", str(p)],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["clustering"] == 1.0
