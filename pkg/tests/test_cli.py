"""CLI tests: subcommands, formats, determinism, exit codes, schema."""

import csv
import io
import json

import pytest

from binom_rare.cli import main

try:
    from importlib.resources import files as resource_files
except ImportError:  # pragma: no cover
    resource_files = None


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestInterval:
    def test_vaccine_trial_text(self, capsys):
        code, out, _ = run_cli(capsys, "interval", "--estimator", "wald",
                               "--x", "8", "--n", "21720", "--reproducible")
        assert code == 0
        assert "1.1314022653102302e-04" in out
        assert "6.235080239293822e-04" in out
        assert "0.6928242849682726" in out

    def test_degenerate_warning(self, capsys):
        code, out, _ = run_cli(capsys, "interval", "--estimator", "wald",
                               "--x", "0", "--n", "10", "--reproducible")
        assert code == 0
        assert "degenerate" in out

    def test_exact_zero_successes(self, capsys):
        code, out, _ = run_cli(capsys, "interval", "--estimator",
                               "clopper-pearson", "--x", "0", "--n", "10",
                               "--format", "json", "--reproducible")
        assert code == 0
        doc = json.loads(out)
        assert doc["rows"][0]["lower"] == 0.0
        assert doc["rows"][0]["upper"] == pytest.approx(0.3085, abs=5e-5)

    def test_bad_observation_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "interval", "--estimator", "wald",
                               "--x", "11", "--n", "10")
        assert code == 2
        assert "error" in err

    def test_bad_alpha_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "interval", "--estimator", "wald",
                             "--x", "1", "--n", "10", "--alpha", "1.5")
        assert code == 2


class TestEvaluate:
    def test_single_point(self, capsys):
        code, out, _ = run_cli(capsys, "evaluate", "--estimator", "all",
                               "--p", "0.1", "--n", "10", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out.split("#")[0].strip())))
        header, data = rows[0], rows[1:]
        assert header[0] == "estimator"
        wald = dict(zip(header, data[0]))
        assert wald["estimator"] == "wald"
        assert float(wald["cpr"]) == pytest.approx(0.650, abs=0.001)
        assert float(wald["eps_r"]) == pytest.approx(1.40, abs=0.01)
        assert wald["coverage_band"] == "unacceptable"

    def test_p_outside_unit_interval(self, capsys):
        code, _, _ = run_cli(capsys, "evaluate", "--p", "1.5", "--n", "10")
        assert code == 2

    def test_n_flag_conflict(self, capsys):
        code, _, _ = run_cli(capsys, "evaluate", "--p", "0.1", "--n", "10",
                             "--n-start", "10", "--n-end", "20")
        assert code == 2

    def test_json_matches_schema(self, capsys):
        jsonschema = pytest.importorskip("jsonschema")
        code, out, _ = run_cli(capsys, "evaluate", "--p", "0.1", "--n-start",
                               "10", "--n-end", "30", "--n-step", "10",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        schema = json.loads(resource_files("binom_rare").joinpath(
            "data/report_schema.json").read_text())
        jsonschema.validate(doc, schema)
        assert len(doc["rows"]) == 4 * 3


class TestPlan:
    def test_all_estimators(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--p-star", "0.1", "--eps-r",
                               "0.4", "--format", "csv")
        assert code == 0
        rows = {r["estimator"]: r for r in csv.DictReader(
            io.StringIO("\n".join(l for l in out.splitlines()
                                  if not l.startswith("#"))))}
        assert rows["wald"]["n_2sig"] == "2.2e+02"
        assert rows["clopper-pearson"]["n_2sig"] == "3.0e+02"
        assert rows["wilson"]["n_2sig"] == "2.2e+02"
        assert rows["agresti-coull"]["n_2sig"] == "2.3e+02"

    def test_scheme_value(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--p-star", "0.5", "--epsilon",
                               "4e-4", "--estimator", "wald", "--format", "csv")
        assert code == 0
        assert "6.0e+06" in out

    def test_out_of_range_warning(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--p-star", "1e-5", "--eps-r",
                               "1.0", "--estimator", "wald", "--format", "csv")
        assert code == 0
        assert "outside" in out or "exceeds" in out

    def test_both_margins_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "plan", "--p-star", "0.1", "--eps-r",
                             "0.4", "--epsilon", "0.04")
        assert code == 2

    def test_neither_margin_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "plan", "--p-star", "0.1")
        assert code == 2


class TestSweep:
    def test_csv_to_file(self, capsys, tmp_path):
        out_file = tmp_path / "sweep.csv"
        code, _, _ = run_cli(capsys, "sweep", "--p", "0.1", "--alpha", "0.01",
                             "--n-start", "200", "--n-end", "280", "--n-step",
                             "20", "--estimator", "wald", "--out",
                             str(out_file))
        assert code == 0
        text = out_file.read_text()
        lines = [l for l in text.splitlines() if l and not l.startswith("#")]
        assert lines[0] == "estimator,n,cpr,eps_r"
        assert len(lines) == 1 + 5
        assert "first n with both bands at target: wald=240" in text

    def test_empty_grid_header_only(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--p", "0.1", "--n-start",
                               "100", "--n-end", "80")
        assert code == 0
        assert out == "estimator,n,cpr,eps_r\n"

    def test_unwritable_path_io_error(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--p", "0.1", "--n-start",
                               "10", "--n-end", "20", "--out",
                               "/nonexistent-dir/x.csv")
        assert code == 3
        assert "i/o error" in err

    def test_round_trip_byte_identical(self, capsys, tmp_path):
        out_file = tmp_path / "sweep.csv"
        run_cli(capsys, "sweep", "--p", "0.02", "--n-start", "100", "--n-end",
                "300", "--n-step", "100", "--out", str(out_file))
        original = out_file.read_text()
        data_lines = [l for l in original.splitlines() if not l.startswith("#")]
        parsed = list(csv.reader(io.StringIO("\n".join(data_lines))))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        from binom_rare.render import canon_num
        writer.writerow(parsed[0])
        for row in parsed[1:]:
            writer.writerow([row[0], str(int(row[1])), canon_num(float(row[2])),
                             canon_num(float(row[3]))])
        rebuilt = buf.getvalue()
        assert rebuilt == "\n".join(data_lines) + "\n"


class TestTables:
    def test_threshold_table_values(self, capsys):
        code, out, _ = run_cli(capsys, "tables", "--table", "4", "--format",
                               "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        cell = next(r for r in rows if r["p_star"] == "0.1"
                    and r["a"] == "5" and r["alpha"] == "0.05")
        assert cell["eps_r_threshold"] == "0.83"
        assert len(rows) == 30

    def test_fixed_scheme_table(self, capsys):
        code, out, _ = run_cli(capsys, "tables", "--table", "2", "--format",
                               "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        cell = next(r for r in rows if r["p"] == "0.001" and r["scheme"] == "1")
        assert cell["n"] == "3.0e+00"
        assert cell["wald_cpr_pct"] == "0.3"

    def test_unknown_table_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "tables", "--table", "5")
        assert code == 2

    def test_performance_table_banded_text(self, capsys):
        code, out, _ = run_cli(capsys, "tables", "--table", "6",
                               "--reproducible", "--no-color")
        assert code == 0
        assert "\x1b[" not in out  # not a terminal: never colored
        assert "65.0" in out and "1.40" in out


class TestCaseStudy:
    def test_adhd(self, capsys):
        code, out, _ = run_cli(capsys, "case-study", "--name", "adhd",
                               "--reproducible")
        assert code == 0
        assert "0.06" in out
        assert "narrower than recommended" in out
        assert "n = 605" in out and "published value 606" in out

    def test_covid_json(self, capsys):
        code, out, _ = run_cli(capsys, "case-study", "--name", "covid",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        rows = {r["estimator"]: r for r in doc["rows"]}
        assert rows["wald"]["cpr"] == pytest.approx(0.892, abs=0.001)
        assert rows["clopper-pearson"]["cpr"] == pytest.approx(0.969, abs=0.001)
        assert rows["wilson"]["cpr"] == pytest.approx(0.952, abs=0.001)
        assert rows["agresti-coull"]["cpr"] == pytest.approx(0.952, abs=0.001)
        assert rows["wald"]["realized_eps_r"] == pytest.approx(0.69, abs=0.01)

    def test_aircraft(self, capsys):
        code, out, _ = run_cli(capsys, "case-study", "--name", "aircraft",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        rows = {r["estimator"]: r for r in doc["rows"]}
        assert rows["wald"]["realized_eps_r"] == pytest.approx(0.48, abs=0.01)
        assert rows["clopper-pearson"]["enum_eps_r"] == pytest.approx(
            0.501, abs=0.002)

    def test_unknown_name_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["case-study", "--name", "nope"])
        assert exc.value.code == 2


class TestThresholds:
    def test_default_grid(self, capsys):
        code, out, _ = run_cli(capsys, "thresholds", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 30
        assert any(r["eps_r_threshold"] == "0.83" for r in rows)


class TestDeterminismAndColor:
    def test_identical_bytes_csv(self, capsys):
        args = ("evaluate", "--p", "0.1", "--n", "40", "--format", "csv")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_identical_bytes_reproducible_text(self, capsys):
        args = ("tables", "--table", "4", "--reproducible")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_timestamp_only_in_default_text(self, capsys):
        _, with_ts, _ = run_cli(capsys, "tables", "--table", "4")
        _, without_ts, _ = run_cli(capsys, "tables", "--table", "4",
                                   "--reproducible")
        assert with_ts.startswith("# binom-rare")
        assert not without_ts.startswith("# binom-rare")
        _, as_csv, _ = run_cli(capsys, "tables", "--table", "4", "--format",
                               "csv")
        assert "generated" not in as_csv

    def test_no_color_env(self, capsys, monkeypatch):
        monkeypatch.setenv("BINOM_RARE_NO_COLOR", "1")
        _, out, _ = run_cli(capsys, "tables", "--table", "6", "--reproducible")
        assert "\x1b[" not in out

    def test_version_matches_package(self, capsys):
        import binom_rare
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        out = capsys.readouterr().out.strip()
        assert out == binom_rare.__version__
