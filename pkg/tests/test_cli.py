"""CLI: round-trips, exit codes, diagnostics, report schema."""

import json

import jsonschema
import pytest

from fracdecomp import io as fio
from fracdecomp.cli import main
from fracdecomp.graph import Graph, complete_graph
from fracdecomp.io import load_report_schema


@pytest.fixture
def k8_minus_edge(tmp_path):
    g = Graph(8, set(complete_graph(8).edges) - {(0, 1)})
    path = tmp_path / "g.txt"
    fio.write_graph(path, g)
    return path


def run(args, tmp_path, name="report.json"):
    report_path = tmp_path / name
    code = main(["--report", str(report_path), *args])
    return code, json.loads(report_path.read_text())


class TestRoundTrips:
    def test_decompose_verify_roundtrip(self, tmp_path, k8_minus_edge):
        wfile = tmp_path / "w.json"
        code, report = run(
            [
                "decompose-kminusm",
                "--r", "3", "--k", "8", "--matching", "0-1",
                "--out", str(wfile),
            ],
            tmp_path,
        )
        assert code == 0 and report["verdict"] == "pass"
        code, report = run(
            ["verify", "--graph", str(k8_minus_edge), "--weights", str(wfile)],
            tmp_path,
            "report2.json",
        )
        assert code == 0 and report["verdict"] == "pass"
        # emitted weighting re-parses identically
        w = fio.read_weighting(wfile)
        fio.write_weighting(tmp_path / "again.json", w)
        assert (tmp_path / "again.json").read_text() == wfile.read_text()

    def test_correct_then_verify_with_targets(self, tmp_path):
        targets = tmp_path / "t.txt"
        lines = []
        for u in range(8):
            for v in range(u + 1, 8):
                value = "6/7" if (u, v) == (0, 1) else "1/1"
                lines.append(f"{u} {v} {value}")
        targets.write_text("\n".join(lines) + "\n")
        wfile = tmp_path / "w.json"
        code, report = run(
            ["correct", "--r", "3", "--targets", str(targets), "--out", str(wfile)],
            tmp_path,
        )
        assert code == 0
        gfile = tmp_path / "k8.txt"
        fio.write_graph(gfile, complete_graph(8))
        code, report = run(
            [
                "verify",
                "--graph", str(gfile),
                "--weights", str(wfile),
                "--target", str(targets),
            ],
            tmp_path,
            "report2.json",
        )
        assert code == 0 and report["verdict"] == "pass"

    def test_decompose_sparse(self, tmp_path):
        e1 = [(0, 1), (2, 3)]
        e2 = [(1, 2)]
        g = Graph(
            18, set(complete_graph(18).edges) - set(e1) - set(e2)
        )
        gfile = tmp_path / "g.txt"
        fio.write_graph(gfile, g)
        pfile = tmp_path / "p.txt"
        pfile.write_text("0-1,2-3\n1-2\n")
        wfile = tmp_path / "w.json"
        code, report = run(
            [
                "decompose-sparse",
                "--r", "3", "--graph", str(gfile),
                "--partition", str(pfile), "--out", str(wfile),
            ],
            tmp_path,
        )
        assert code == 0 and report["verdict"] == "pass"
        code, _ = run(
            ["verify", "--graph", str(gfile), "--weights", str(wfile)],
            tmp_path,
            "report2.json",
        )
        assert code == 0

    def test_lift_roundtrip(self, tmp_path):
        from fracdecomp.graph import CliqueWeighting, enumerate_cliques
        from fracdecomp.rational import rat

        g = complete_graph(10)
        gfile = tmp_path / "g.txt"
        fio.write_graph(gfile, g)
        w22 = CliqueWeighting(8, {c: rat(1, 30) for c in enumerate_cliques(g, 8)})
        wfile = tmp_path / "w22.json"
        fio.write_weighting(wfile, w22)
        out = tmp_path / "out.json"
        code, report = run(
            [
                "lift",
                "--r", "3", "--graph", str(gfile),
                "--weights", str(wfile), "--out", str(out),
            ],
            tmp_path,
        )
        assert code == 0 and report["verdict"] == "pass"


class TestDiagnosticsAndCodes:
    def test_malformed_self_loop_named_line(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("4 1\n3 3\n")
        w = tmp_path / "w.json"
        w.write_text('{"r": 3, "entries": []}')
        code, report = run(
            ["verify", "--graph", str(bad), "--weights", str(w)], tmp_path
        )
        assert code == 2
        assert report["verdict"] == "error"
        assert "line 2" in report["residual_summary"][0]

    def test_usage_error(self):
        assert main(["decompose-kminusm", "--r", "3"]) == 2

    def test_failing_verify_is_exit_1(self, tmp_path, k8_minus_edge):
        w = tmp_path / "w.json"
        w.write_text('{"r": 3, "entries": []}')
        code, report = run(
            ["verify", "--graph", str(k8_minus_edge), "--weights", str(w)], tmp_path
        )
        assert code == 1 and report["verdict"] == "fail"
        assert report["residual_summary"]

    def test_lp_check_star_infeasible(self, tmp_path):
        star = tmp_path / "star.txt"
        star.write_text("4 3\n0 1\n0 2\n0 3\n")
        code, report = run(
            ["lp-check", "--graph", str(star), "--r", "3"], tmp_path
        )
        assert code == 1 and report["verdict"] == "infeasible"
        assert report["artifact"]["certificate"]

    def test_pipeline_infeasible_exit(self, tmp_path):
        c5 = tmp_path / "c5.txt"
        c5.write_text("5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n")
        code, report = run(
            ["decompose", "--graph", str(c5), "--r", "3"], tmp_path
        )
        assert code == 1 and report["verdict"] == "infeasible"

    def test_decompose_validate_mode(self, tmp_path):
        gfile = tmp_path / "g.txt"
        fio.write_graph(gfile, complete_graph(24))
        code, report = run(
            [
                "decompose",
                "--graph", str(gfile), "--r", "3", "--mode", "validate",
                "--pattern-size", "4", "--n-samples", "2000", "--seed", "3",
            ],
            tmp_path,
        )
        assert code == 0 and report["verdict"] == "pass"
        assert report["approximate"] is True
        assert report["artifact"]["mode"] == "validate"


class TestReports:
    def test_schema_validates_reports(self, tmp_path, k8_minus_edge):
        schema = load_report_schema()
        wfile = tmp_path / "w.json"
        code, report = run(
            [
                "decompose-kminusm",
                "--r", "3", "--k", "8", "--matching", "0-1",
                "--out", str(wfile),
            ],
            tmp_path,
        )
        jsonschema.validate(report, schema)
        bad = tmp_path / "bad.txt"
        bad.write_text("4 1\n3 3\n")
        code, report = run(
            ["verify", "--graph", str(bad), "--weights", str(wfile)],
            tmp_path,
            "report2.json",
        )
        jsonschema.validate(report, schema)

    def test_sample_marginals_csv(self, tmp_path):
        gfile = tmp_path / "g.txt"
        fio.write_graph(gfile, complete_graph(24))
        csv = tmp_path / "m.csv"
        code, report = run(
            [
                "sample",
                "--graph", str(gfile), "--r", "3",
                "--n-samples", "500", "--seed", "7",
                "--marginals", "--out", str(csv),
            ],
            tmp_path,
        )
        assert code == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "u,v,estimate,halfwidth"
        assert len(lines) == 1 + 276
        assert report["approximate"] is True

    def test_family_marginals_enumerated(self, tmp_path):
        code, report = run(
            [
                "family-marginals",
                "--kind", "m", "--r", "3", "--ell", "5", "--k", "2",
                "--enumerate",
            ],
            tmp_path,
        )
        assert code == 0
        assert report["artifact"]["enumeration_matches_marginals"] is True
