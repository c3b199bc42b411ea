import json

import pytest

from bcva.cli import main, rows_to_csv, run_rows
from bcva.config import parse_config
from bcva.errors import ConfigError
from bcva.mc import McConfig


def forward_config(**overrides):
    doc = {
        "instrument": {"type": "forward", "s0": 1.0, "sigma": 0.4, "strike": 1.0,
                       "maturity": 5.0},
        "credit": {"lgd_a": 1.0, "lgd_b": 1.0},
        "default_model": {"lambda_a": 0.1, "lambda_b": 0.05, "theta": 2.0},
        "rate": 0.0,
        "method": {"type": "semi_analytic"},
    }
    doc.update(overrides)
    return doc


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestConfigParsing:
    def test_round_trip_theta(self):
        cfg = parse_config(json.dumps(forward_config()))
        assert cfg.theta == 2.0
        assert cfg.method == "semi_analytic"

    def test_kendall_tau_equivalent_to_theta(self):
        by_theta = forward_config()
        by_tau = forward_config(
            default_model={"lambda_a": 0.1, "lambda_b": 0.05, "kendall_tau": 0.5}
        )
        rows_theta = run_rows(parse_config(json.dumps(by_theta)))
        rows_tau = run_rows(parse_config(json.dumps(by_tau)))
        assert rows_to_csv(rows_theta) == rows_to_csv(rows_tau)

    def test_both_theta_and_tau_rejected(self):
        doc = forward_config(
            default_model={"lambda_a": 0.1, "lambda_b": 0.05, "theta": 2.0,
                           "kendall_tau": 0.5}
        )
        with pytest.raises(ConfigError, match="theta"):
            parse_config(json.dumps(doc))

    def test_missing_field_named(self):
        doc = forward_config()
        del doc["instrument"]["strike"]
        with pytest.raises(ConfigError, match="strike"):
            parse_config(json.dumps(doc))

    def test_unsorted_sweep_rejected(self):
        doc = forward_config(sweep={"variable": "tau", "grid": [0.5, 0.1]})
        with pytest.raises(ConfigError, match="sorted"):
            parse_config(json.dumps(doc))

    def test_invalid_json_reports_line(self):
        with pytest.raises(ConfigError, match="line"):
            parse_config("{not json")

    def test_mc_method_parsed(self):
        doc = forward_config(method={"type": "mc", "n_paths": 1000, "seed": 7})
        cfg = parse_config(json.dumps(doc))
        assert cfg.method == McConfig(n_paths=1000, seed=7)


class TestCliExitCodes:
    def test_price_success(self, tmp_path, capsys):
        path = write_config(tmp_path, forward_config())
        assert main(["price", path]) == 0
        out = capsys.readouterr().out
        assert out.startswith("sweep_value,risk_free_value,")
        assert len(out.strip().splitlines()) == 2

    def test_config_error_exits_2(self, tmp_path):
        doc = forward_config()
        del doc["default_model"]
        path = write_config(tmp_path, doc)
        assert main(["price", path]) == 2

    def test_missing_file_exits_2(self):
        assert main(["price", "/nonexistent/config.json"]) == 2

    def test_sweep_requires_sweep_section(self, tmp_path):
        path = write_config(tmp_path, forward_config())
        assert main(["sweep", path]) == 2

    def test_price_rejects_sweep_section(self, tmp_path):
        doc = forward_config(sweep={"variable": "tau", "grid": [0.0, 0.5]})
        path = write_config(tmp_path, doc)
        assert main(["price", path]) == 2

    def test_numerical_failure_exits_3(self, tmp_path, monkeypatch):
        from bcva import errors

        def boom(*args, **kwargs):
            raise errors.NumericalError("injected")

        monkeypatch.setattr("bcva.cli.bcva_full_forward", boom)
        path = write_config(tmp_path, forward_config())
        assert main(["price", path]) == 3


class TestSweepOutputs:
    def test_tau_sweep_difference_monotone(self, tmp_path):
        doc = forward_config(sweep={"variable": "tau", "grid": [0.0, 0.5, 0.9]})
        out = tmp_path / "rows.csv"
        assert main(["sweep", write_config(tmp_path, doc), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        header = lines[0].split(",")
        diffs = [float(line.split(",")[header.index("difference")]) for line in lines[1:]]
        assert diffs == sorted(diffs) and diffs[0] < diffs[-1]

    def test_lambda_sweep_flattens_toward_ucva(self, tmp_path):
        doc = forward_config(
            instrument={"type": "forward", "s0": 1.0, "sigma": 0.4, "strike": 0.8,
                        "maturity": 5.0},
            default_model={"lambda_a": 0.1, "lambda_b": 0.05, "kendall_tau": 0.9},
            sweep={"variable": "lambda_a", "grid": [0.1, 0.5, 1.0, 2.0, 5.0]},
        )
        out = tmp_path / "rows.csv"
        assert main(["sweep", write_config(tmp_path, doc), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        header = lines[0].split(",")
        rows = [line.split(",") for line in lines[1:]]
        diffs = [float(r[header.index("difference")]) for r in rows]
        ucva = float(rows[-1][header.index("ucva_a")])
        assert diffs == sorted(diffs)
        assert abs(diffs[-1] - ucva) / ucva < 0.05

    def test_zcb_price_closed_form(self, tmp_path, capsys):
        doc = {
            "instrument": {"type": "zcb", "maturity": 5.0},
            "credit": {"lgd_a": 1.0, "lgd_b": 1.0},
            "default_model": {"lambda_a": 0.1, "lambda_b": 0.05, "theta": 1.0},
            "method": {"type": "semi_analytic"},
        }
        assert main(["price", write_config(tmp_path, doc)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        header = lines[0].split(",")
        row = lines[1].split(",")
        assert float(row[header.index("difference")]) == pytest.approx(0.045321, abs=5e-7)
        assert float(row[header.index("difference_stderr")]) == 0.0

    def test_mc_csv_byte_identical_across_threads(self, tmp_path):
        doc = forward_config(
            method={"type": "mc", "n_paths": 100_000, "seed": 99, "chunk_size": 16384},
            sweep={"variable": "tau", "grid": [0.0, 0.9]},
        )
        path = write_config(tmp_path, doc)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", path, "--out", str(out1), "--threads", "1"]) == 0
        assert main(["sweep", path, "--out", str(out2), "--threads", "8"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_svg_emission(self, tmp_path):
        doc = forward_config(sweep={"variable": "tau", "grid": [0.0, 0.5, 0.9]})
        svg = tmp_path / "plot.svg"
        args = ["sweep", write_config(tmp_path, doc), "--out", str(tmp_path / "r.csv"),
                "--svg", str(svg)]
        assert main(args) == 0
        assert svg.read_text().lstrip().startswith("<?xml")


class TestValidateCommand:
    def test_default_build_passes(self, tmp_path):
        out = tmp_path / "report.txt"
        assert main(["validate", "--out", str(out)]) == 0
        report = out.read_text()
        assert "FAIL" not in report
        assert "partial-finite-difference" in report

    def test_report_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(["validate", "--out", str(a)]) == 0
        assert main(["validate", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_injected_fault_names_check(self, tmp_path, monkeypatch, capsys):
        from bcva.default_model import GumbelBivariateExponential as G

        original = G.survival_partial_x2

        def wrong_sign(self, x1, x2):
            return -original(self, x1, x2)

        monkeypatch.setattr(G, "survival_partial_x2", wrong_sign)
        out = tmp_path / "report.txt"
        assert main(["validate", "--out", str(out)]) == 1
        err = capsys.readouterr().err
        assert "partial-finite-difference" in err
