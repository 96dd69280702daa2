import json
import random

import pytest

from hymis import batch
from hymis.cli import EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_STRUCTURE, main
from hymis.config import settings
from hymis.exact import brute_force_alpha
from hymis.formats import parse_hmetis, parse_solution, write_hmetis

from tests.generators import random_hypergraph


PATH = "2 3\n1 2\n2 3\n"
TRIANGLE = "3 3\n1 2\n1 3\n2 3\n"
TWINS = "4 4\n1 3\n1 4\n2 3\n2 4\n"
SIX_CYCLE = "6 6\n1 2\n1 6\n2 3\n3 4\n4 5\n5 6\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


def test_reduce_path_instance(write, tmp_path):
    source = write("path.hgr", PATH)
    out = tmp_path / "kernel.hgr"
    assert main(["reduce", str(source), "--out", str(out)]) == EXIT_OK
    assert out.read_text() == "0 0\n"
    assert (tmp_path / "kernel.map").read_text() == ""
    stats = json.loads((tmp_path / "kernel.stats.json").read_text())
    assert (stats["n_r"], stats["m_r"], stats["offset"]) == (0, 0, 2)
    trace = (tmp_path / "kernel.trace.jsonl").read_text().splitlines()
    assert sum(json.loads(line)["alpha_offset"] for line in trace) == 2


def test_reduce_irreducible_instance(write, tmp_path):
    source = write("cycle.hgr", SIX_CYCLE)
    out = tmp_path / "kernel.hgr"
    trace = tmp_path / "custom.jsonl"
    assert main(["reduce", str(source), "--out", str(out), "--trace", str(trace)]) == EXIT_OK
    assert out.read_text() == SIX_CYCLE
    assert trace.read_text() == ""


def test_reduce_with_rule_filter(write, tmp_path):
    source = write("twins.hgr", TWINS)
    out = tmp_path / "kernel.hgr"
    assert main(["reduce", str(source), "--out", str(out), "--rules", "DegreeZero,DegreeOne"]) == EXIT_OK
    assert parse_hmetis(out.read_text()).num_vertices == 4

    assert main(["reduce", str(source), "--out", str(out)]) == EXIT_OK
    assert out.read_text() == "0 0\n"


def test_reduce_is_deterministic(write, tmp_path):
    rng = random.Random(21)
    source = write("random.hgr", write_hmetis(random_hypergraph(rng, min_vertices=30, max_vertices=40, max_edges=60)))
    for name in ("a", "b"):
        assert main(["reduce", str(source), "--out", str(tmp_path / name / "k.hgr")]) == EXIT_OK
    for suffix in ("k.hgr", "k.map", "k.trace.jsonl"):
        assert (tmp_path / "a" / suffix).read_bytes() == (tmp_path / "b" / suffix).read_bytes()
    first = json.loads((tmp_path / "a" / "k.stats.json").read_text())
    second = json.loads((tmp_path / "b" / "k.stats.json").read_text())
    first.pop("t")
    second.pop("t")
    assert first == second


def test_solve_triangle(write, tmp_path, capsys):
    source = write("triangle.hgr", TRIANGLE)
    out = tmp_path / "triangle.sol"
    assert main(["solve", str(source), "--out", str(out)]) == EXIT_OK
    assert len(parse_solution(out.read_text())) == 1
    assert "cardinality 1" in capsys.readouterr().out


def test_reduce_then_lift_matches_direct_solve(write, tmp_path):
    rng = random.Random(22)
    for i in range(30):
        h = random_hypergraph(rng, max_vertices=16, max_edges=24)
        source = write(f"r{i}.hgr", write_hmetis(h))
        kernel = tmp_path / f"r{i}.kernel.hgr"
        direct = tmp_path / f"r{i}.direct.sol"
        lifted = tmp_path / f"r{i}.lifted.sol"
        trace = tmp_path / f"r{i}.trace.jsonl"

        assert main(["reduce", str(source), "--out", str(kernel), "--trace", str(trace)]) == EXIT_OK
        assert main(["solve", str(source), "--out", str(direct)]) == EXIT_OK
        assert main(["solve", str(kernel), "--lift", str(trace), "--out", str(lifted)]) == EXIT_OK

        members = parse_solution(lifted.read_text())
        assert len(members) == len(parse_solution(direct.read_text())) == brute_force_alpha(h)
        assert main(["verify", str(source), str(lifted)]) == EXIT_OK


def test_lift_rejects_mismatched_map(write, tmp_path):
    source = write("path.hgr", PATH)
    kernel = tmp_path / "kernel.hgr"
    assert main(["reduce", str(source), "--out", str(kernel)]) == EXIT_OK
    wrong_map = write("wrong.map", "1 1\n")
    code = main(["solve", str(kernel), "--lift", str(tmp_path / "kernel.trace.jsonl"), "--map", str(wrong_map)])
    assert code == EXIT_STRUCTURE


def test_verify_reports_violated_edge(write, capsys):
    source = write("edge.hgr", "1 3\n1 2 3\n")
    solution = write("bad.sol", "1\n3\n")
    assert main(["verify", str(source), str(solution)]) == EXIT_INVALID
    assert "edge 1" in capsys.readouterr().out


def test_expand_writes_metis(write, tmp_path):
    source = write("path.hgr", PATH)
    out = tmp_path / "path.graph"
    assert main(["expand", str(source), "--out", str(out)]) == EXIT_OK
    assert out.read_text() == "3 2\n2\n1 3\n2\n"


def test_export_ilp_modes(write, tmp_path):
    source = write("triple.hgr", "1 3\n1 2 3\n")
    hyper = tmp_path / "h.lp"
    graph = tmp_path / "g.lp"
    assert main(["export-ilp", str(source), "--out", str(hyper)]) == EXIT_OK
    assert main(["export-ilp", str(source), "--mode", "graph", "--out", str(graph)]) == EXIT_OK
    assert " c1: x1 + x2 + x3 <= 1" in hyper.read_text()
    assert " c3: x2 + x3 <= 1" in graph.read_text()


def test_stats_prints_report(write, capsys):
    source = write("path.hgr", PATH)
    assert main(["stats", str(source)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report["n"], report["m"], report["n_r"], report["offset"]) == (3, 2, 0, 2)


def test_exit_codes(write, tmp_path):
    bad = write("bad.hgr", "1 2\n1 3\n")
    good = write("path.hgr", PATH)
    out = str(tmp_path / "k.hgr")
    assert main(["reduce", str(bad), "--out", out]) == EXIT_PARSE
    assert main(["reduce", str(tmp_path / "missing.hgr"), "--out", out]) == EXIT_PARSE
    assert main(["reduce", str(good), "--out", out, "--rules", "Bogus"]) == EXIT_STRUCTURE
    assert main(["reduce", str(good)]) == EXIT_STRUCTURE


def test_solve_over_size_bound(write, monkeypatch):
    monkeypatch.setattr(settings, "exact_max_vertices", 2)
    monkeypatch.setattr(settings, "exact_time_limit", None)
    source = write("path.hgr", PATH)
    assert main(["solve", str(source)]) == EXIT_RESOURCE
    assert main(["solve", str(source), "--time-limit", "5"]) == EXIT_OK


@pytest.mark.parametrize("workers", ["1", "2"])
def test_batch_reduce(tmp_path, workers):
    instances = tmp_path / "instances"
    instances.mkdir()
    (instances / "path.hgr").write_text(PATH)
    (instances / "twins.hgr").write_text(TWINS)
    (instances / "notes.txt").write_text("ignored")
    out_dir = tmp_path / "kernels"
    csv_path = tmp_path / "stats.csv"
    args = ["reduce", "--dir", str(instances), "--out-dir", str(out_dir), "--csv", str(csv_path), "--workers", workers]
    assert main(args) == EXIT_OK
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("instance,n,m,")
    assert [row.split(",")[0] for row in rows[1:]] == ["path.hgr", "twins.hgr"]
    assert (out_dir / "twins.hgr").read_text() == "0 0\n"
    assert (out_dir / "path.trace.jsonl").exists()


def test_batch_reports_failed_instance(tmp_path):
    instances = tmp_path / "instances"
    instances.mkdir()
    (instances / "a.hgr").write_text(PATH)
    (instances / "b.hgr").write_text("1 2\n1 3\n")
    csv_path = tmp_path / "stats.csv"
    args = ["reduce", "--dir", str(instances), "--out-dir", str(tmp_path / "out"), "--csv", str(csv_path), "--workers", "1"]
    assert main(args) == EXIT_STRUCTURE
    failed = csv_path.read_text().splitlines()[2]
    assert failed.startswith("b.hgr,")
    assert "ParseError" in failed


def test_batch_refuses_to_write_kernels_over_inputs(tmp_path):
    instances = tmp_path / "instances"
    instances.mkdir()
    (instances / "path.hgr").write_text(PATH)
    args = ["reduce", "--dir", str(instances), "--out-dir", str(instances), "--csv", str(tmp_path / "stats.csv")]
    assert main(args) == EXIT_STRUCTURE
    assert (instances / "path.hgr").read_text() == PATH
    assert not (instances / "path.map").exists()


def test_batch_workers_capped_by_thread_setting(tmp_path, monkeypatch):
    def no_pool(*args, **kwargs):
        raise AssertionError("process pool used with HYMIS_THREADS=1")

    monkeypatch.setattr(settings, "threads", 1)
    monkeypatch.setattr(batch, "ProcessPoolExecutor", no_pool)
    instances = tmp_path / "instances"
    instances.mkdir()
    (instances / "a.hgr").write_text(PATH)
    (instances / "b.hgr").write_text(TWINS)
    args = ["reduce", "--dir", str(instances), "--out-dir", str(tmp_path / "out"), "--workers", "4"]
    assert main(args) == EXIT_OK
    assert (tmp_path / "out" / "b.hgr").read_text() == "0 0\n"
