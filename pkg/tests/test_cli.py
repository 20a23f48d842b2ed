"""CLI, CSV ingestion, and report serialization contracts."""

import json
import subprocess

import numpy as np
import pytest

from gpdiff.benchmarks import gp_sample_draw
from gpdiff.cli import main, parse_bounds
from gpdiff.dataio import ingest_csv, write_dataset_csv


def write_pair(tmp_path, n=40, seed=0, offset=0.0, name1="a.csv", name2="b.csv"):
    """Two CSV datasets drawn from one smooth function, optionally offset."""
    pair = gp_sample_draw(n, seed=seed, perturb=False)
    p1 = tmp_path / name1
    p2 = tmp_path / name2
    write_dataset_csv(p1, pair.X1, pair.y1, ["x"], "y")
    write_dataset_csv(p2, pair.X2, pair.y2 + offset, ["x"], "y")
    return p1, p2


class TestIngestCsv:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((30, 2)) * 1e3
        y = rng.standard_normal(30) / 7.0
        path = tmp_path / "data.csv"
        write_dataset_csv(path, X, y, ["u", "v"], "resp")
        got = ingest_csv(path, ["u", "v"], "resp")
        np.testing.assert_array_equal(got.X, X)
        np.testing.assert_array_equal(got.y, y)

    def test_summary_reports_rows_and_ranges(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x,y\n1.0,10.0\n3.0,-2.0\n2.0,4.0\n")
        got = ingest_csv(path, ["x"], "y")
        assert got.summary["rows"] == 3
        assert got.summary["columns"]["x"] == {"min": 1.0, "max": 3.0}
        assert got.summary["columns"]["y"] == {"min": -2.0, "max": 10.0}

    def test_column_order_follows_request(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("y,b,a\n1.0,2.0,3.0\n4.0,5.0,6.0\n")
        got = ingest_csv(path, ["a", "b"], "y")
        np.testing.assert_array_equal(got.X, [[3.0, 2.0], [6.0, 5.0]])
        np.testing.assert_array_equal(got.y, [1.0, 4.0])

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x,y\n1.0,2.0\n")
        with pytest.raises(ValueError, match="power"):
            ingest_csv(path, ["x"], "power")

    def test_unparsable_cell_names_row(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x,y\n1.0,2.0\n1.5,oops\n2.0,3.0\n")
        with pytest.raises(ValueError, match="row 3"):
            ingest_csv(path, ["x"], "y")

    def test_nan_cell_names_row(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x,y\n1.0,2.0\n1.5,3.0\n2.0,NaN\n")
        with pytest.raises(ValueError, match="row 4"):
            ingest_csv(path, ["x"], "y")

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x,y\n1.0,2.0\n")
        with pytest.raises(ValueError, match="at least 2"):
            ingest_csv(path, ["x"], "y")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ingest_csv(tmp_path / "absent.csv", ["x"], "y")


class TestParseBounds:
    def test_single_pair(self):
        np.testing.assert_array_equal(parse_bounds("0:1"), [[0.0, 1.0]])

    def test_multiple_pairs(self):
        np.testing.assert_array_equal(
            parse_bounds("0:1,-2.5:7"), [[0.0, 1.0], [-2.5, 7.0]]
        )

    def test_rejects_bad_token(self):
        with pytest.raises(ValueError, match="lo:hi"):
            parse_bounds("0-1")
        with pytest.raises(ValueError, match="numeric"):
            parse_bounds("a:b")

    def test_rejects_inverted(self):
        with pytest.raises(ValueError, match="lo < hi"):
            parse_bounds("2:1")


class TestCompareCommand:
    def compare_args(self, p1, p2, *extra):
        return [
            "compare", str(p1), str(p2),
            "--input-cols", "x", "--response-col", "y",
            "--grid-size", "100", "--restarts", "1",
            *extra,
        ]

    def test_same_function_accepts_with_reports(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path, seed=3)
        out = tmp_path / "report"
        code = main(self.compare_args(p1, p2, "--out", str(out)))
        assert code == 0
        stdout = capsys.readouterr().out
        assert "40 rows" in stdout
        assert "decision: accept" in stdout

        report = json.loads((out / "report.json").read_text())
        assert report["decision"] == "accept"
        delta = np.array(report["delta"])
        assert report["rejected_percent"] == pytest.approx(
            100.0 * np.mean(delta > 0.0)
        )
        assert len(report["diff"]) == 100
        assert report["config"]["grid_size"] == 100

        band_lines = (out / "band.csv").read_text().strip().splitlines()
        assert band_lines[0] == "x,diff,lower,upper,delta"
        assert len(band_lines) == 101

        svg = (out / "band.svg").read_text()
        assert svg.lstrip().startswith("<?xml")

    def test_gross_offset_rejects(self, tmp_path):
        p1, p2 = write_pair(tmp_path, seed=4, offset=8.0)
        code = main(self.compare_args(p1, p2))
        assert code == 1

    def test_reports_byte_identical(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path, seed=5)
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        assert main(self.compare_args(p1, p2, "--out", str(out1))) == 0
        assert main(self.compare_args(p1, p2, "--out", str(out2))) == 0
        for name in ("report.json", "band.csv", "band.svg"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name

    def test_missing_column_exits_2(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path, seed=6)
        code = main([
            "compare", str(p1), str(p2),
            "--input-cols", "x", "--response-col", "watts",
        ])
        assert code == 2
        assert "watts" in capsys.readouterr().err

    def test_unparsable_cell_exits_2(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path, seed=7)
        p2.write_text("x,y\n0.1,1.0\n0.2,bad\n0.3,2.0\n")
        code = main(self.compare_args(p1, p2))
        assert code == 2
        assert "row 3" in capsys.readouterr().err

    def test_usage_error_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["compare", "a.csv"])
        assert err.value.code == 2

    def test_explicit_bounds_drive_grid(self, tmp_path, capsys):
        p1, p2 = write_pair(tmp_path, seed=8)
        out = tmp_path / "report"
        code = main(self.compare_args(
            p1, p2, "--bounds", "0.3:0.6", "--out", str(out)
        ))
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        grid = np.array(report["grid"])
        assert grid.min() == 0.3
        assert grid.max() == 0.6

    def test_powercurve_preset(self, tmp_path):
        # simple logistic power curve sampled over 3-18 m/s
        for name, seed in (("t1.csv", 1), ("t2.csv", 2)):
            r = np.random.default_rng(seed)
            wind = r.uniform(3.0, 18.0, 60)
            power = 1500.0 / (1.0 + np.exp(-(wind - 10.0))) + 20.0 * r.standard_normal(60)
            write_dataset_csv(tmp_path / name, wind, power, ["wind_speed"], "power")
        out = tmp_path / "report"
        code = main([
            "compare", str(tmp_path / "t1.csv"), str(tmp_path / "t2.csv"),
            "--input-cols", "wind_speed", "--response-col", "power",
            "--preset", "powercurve", "--restarts", "1", "--out", str(out),
        ])
        assert code in (0, 1)
        report = json.loads((out / "report.json").read_text())
        assert report["config"]["alpha"] == 0.10
        assert report["config"]["grid_size"] == 1000
        lo, hi = report["config"]["bounds"][0]
        assert lo >= 5.0 and hi <= 15.0
        grid = np.array(report["grid"])
        assert grid.min() >= 5.0 and grid.max() <= 15.0

    def test_preset_rejects_multi_input(self, tmp_path, capsys):
        path = tmp_path / "m.csv"
        path.write_text("u,v,y\n1,2,3\n2,3,4\n3,4,5\n")
        code = main([
            "compare", str(path), str(path),
            "--input-cols", "u,v", "--response-col", "y",
            "--preset", "powercurve",
        ])
        assert code == 2
        assert "single" in capsys.readouterr().err

    def test_repeated_invocations_mostly_accept(self, tmp_path):
        """Same-function pairs at alpha 0.05 should rarely reject."""
        codes = []
        for seed in range(12):
            p1, p2 = write_pair(
                tmp_path, seed=100 + seed, name1=f"a{seed}.csv", name2=f"b{seed}.csv"
            )
            codes.append(main(self.compare_args(p1, p2, "--seed", str(seed))))
        assert codes.count(0) >= 10


class TestBenchmarkCommand:
    def test_smoke_writes_results(self, tmp_path, capsys):
        out = tmp_path / "bench"
        code = main([
            "benchmark", "gp-sample", "--runs", "2", "--n", "20",
            "--grid-size", "25", "--restarts", "1", "--out", str(out),
        ])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "total runtime" in stdout
        lines = (out / "results.csv").read_text().strip().splitlines()
        assert len(lines) == 2
        header = lines[0].split(",")
        row = dict(zip(header, lines[1].split(",")))
        assert row["function"] == "gp-sample"
        assert 0.0 <= float(row["type1_rate"]) <= 1.0
        assert row["failures_type1"] == "0"

    def test_multiple_sizes_one_row_each(self, tmp_path):
        out = tmp_path / "bench"
        code = main([
            "benchmark", "gp-sample", "--runs", "1", "--n", "20,30",
            "--grid-size", "25", "--restarts", "1", "--type", "type1",
            "--out", str(out),
        ])
        assert code == 0
        lines = (out / "results.csv").read_text().strip().splitlines()
        assert len(lines) == 3
        assert ",20," in lines[1] and ",30," in lines[2]

    def test_unknown_function_exits_2(self, capsys):
        code = main(["benchmark", "quux", "--runs", "1"])
        assert code == 2
        assert "gp-sample" in capsys.readouterr().err

    def test_bad_n_exits_2(self, capsys):
        code = main(["benchmark", "gp-sample", "--n", "20,x"])
        assert code == 2


class TestInstalledEntryPoint:
    def test_help_via_console_script(self):
        done = subprocess.run(
            ["gpdiff", "--help"], capture_output=True, text=True, timeout=60
        )
        assert done.returncode == 0
        assert "compare" in done.stdout
        assert "benchmark" in done.stdout
