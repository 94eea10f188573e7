"""
Tests for the lamekit command line and its run reports.
"""

import json
import os
import sys
from unittest.mock import MagicMock

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.cli import Assertion, RunReport, run
from lamekit.cli.checks import check_catalog, check_lame_table, check_properties, halphen_reference_tau
from lamekit.cli.runner import parse_complex, parse_vector
from lamekit.config.settings import TrackingSettings
from lamekit.exceptions import LamekitError
from lamekit.periods.models import encode_complex
from lamekit.tracking import mlflow_tracker

GOOD_COVER = {
    "id": "identity",
    "curve": {"k": 2, "p": "4*z**3 - g2*z - g3"},
    "target": {"G2": "g2", "G3": "g3"},
    "p_map": "z",
    "pprime_map": "w",
    "pullback": {"constant": "1", "numerator": "1", "w_power": 1},
}
BROKEN_COVER = {**GOOD_COVER, "id": "broken", "p_map": "2*z"}


@pytest.fixture
def broken_catalog(tmp_path):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps({"version": 1, "covers": [GOOD_COVER, BROKEN_COVER]}))
    return path


def run_json(argv, capsys):
    code = run(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


class TestArguments:
    """Test parsing and exit codes."""

    def test_no_command(self):
        assert run([]) == 2

    def test_missing_required(self):
        assert run(["lame"]) == 2

    def test_help(self):
        assert run(["--help"]) == 0

    def test_complex_parsing(self):
        assert parse_complex("1+2i") == 1 + 2j
        assert parse_vector("0.1+0.2j, 3") == [0.1 + 0.2j, 3]
        with pytest.raises(LamekitError):
            parse_complex("one")


class TestLameCommand:
    """Test `lamekit lame`."""

    def test_latex(self, capsys):
        assert run(["lame", "--n", "2", "--format", "latex"]) == 0
        out = capsys.readouterr().out
        assert "n=2" in out
        assert "w^2=" in out

    def test_json_report(self, capsys):
        code, report = run_json(["lame", "--n", "1"], capsys)
        assert code == 0
        assert report["command"] == "lame"
        assert report["passed"] is True
        assert report["parameters"]["n"] == 1

    def test_invalid_order(self, capsys):
        assert run(["lame", "--n", "0"]) == 1
        assert "Error" in capsys.readouterr().out


class TestCoversCommand:
    """Test `lamekit covers verify`."""

    def test_single_case(self, capsys):
        code, report = run_json(["covers", "verify", "--case", "identity"], capsys)
        assert code == 0
        assert {a["name"] for a in report["assertions"]} == {"identity.cover", "identity.differential"}

    def test_broken_catalog(self, broken_catalog, capsys):
        assert run(["covers", "verify", "--all", "--catalog", str(broken_catalog)]) == 1
        out = capsys.readouterr().out
        assert "[FAIL] broken.cover" in out
        assert "[PASS] identity.cover" in out

    def test_unknown_case(self, capsys):
        assert run(["covers", "verify", "--case", "no-such-cover"]) == 1


class TestThetaCommand:
    """Test `lamekit theta eval`."""

    def test_inline_tau(self, capsys):
        code, report = run_json(["theta", "eval", "--v", "0", "--tau", "[[[0, 1]]]", "--jacobi"], capsys)
        assert code == 0
        re, im = report["outputs"]["value"]
        assert abs(re - 1.0864348112133080) < 1e-12
        assert abs(im) < 1e-14
        assert len(report["outputs"]["jacobi"]) == 4

    def test_tau_file(self, tmp_path, capsys):
        path = tmp_path / "tau.json"
        path.write_text(json.dumps({"tau": encode_complex(np.array([[1j, 0.2], [0.2, 1.5j]]))}))
        code, report = run_json(["theta", "eval", "--v", "0.1,0.2i", "--tau-file", str(path),
                                 "--char", "0,0;1/2,0"], capsys)
        assert code == 0
        assert report["outputs"]["char"] == "[0,0;1/2,0]"

    def test_invalid_tau(self, capsys):
        assert run(["theta", "eval", "--v", "0", "--tau", "[[[0, -1]]]"]) == 1


class TestReduceCommand:
    """Test `lamekit reduce`."""

    def test_halphen_chain_from_file(self, tmp_path, capsys):
        path = tmp_path / "tau.json"
        path.write_text(json.dumps(encode_complex(halphen_reference_tau())))
        code, report = run_json(["reduce", "--chain", "halphen", "--tau-file", str(path)], capsys)
        assert code == 0
        assert report["outputs"]["breadth"] == 20
        assert [c["hopf"] for c in report["outputs"]["certificates"]] == [5, 4]

    def test_relation_file(self, tmp_path, capsys):
        m_path, tau_path = tmp_path / "m.json", tmp_path / "tau.json"
        m_path.write_text(json.dumps({"m": [[0, 0, 2, 1], [1, 0, 0, 0]]}))
        tau_path.write_text(json.dumps(encode_complex(np.array([[1.2j, 0.3], [0.3, 0.9j]]))))
        code, report = run_json(["reduce", "--m-file", str(m_path), "--tau-file", str(tau_path)], capsys)
        assert code == 0
        assert report["outputs"]["hopf"] == 2
        assert report["outputs"]["standard"] == [[1, 0, 0, 0], [0, 1, -2, 0]]

    def test_missing_inputs(self):
        assert run(["reduce"]) == 1


class TestChecks:
    """Test individual acceptance checks."""

    def test_lame_table(self):
        assert all(a.passed for a in check_lame_table())

    def test_broken_catalog_is_named(self, broken_catalog):
        failed = {a.name for a in check_catalog(broken_catalog) if not a.passed}
        assert "covers.broken.cover" in failed
        assert "covers.identity.cover" not in failed

    def test_properties_follow_seed(self):
        """Same seed, same samples"""
        first = check_properties(seed=5, eps=1e-14, samples=6, triples=40)
        second = check_properties(seed=5, eps=1e-14, samples=6, triples=40)
        assert all(a.passed for a in first)
        assert [a.value for a in first] == [a.value for a in second]
        assert "40 seeded triples" in {a.detail for a in first}

    @pytest.mark.slow
    def test_properties_full_counts(self):
        assertions = check_properties(seed=20240601, eps=1e-14)
        assert all(a.passed for a in assertions), [a.name for a in assertions if not a.passed]


class TestRunReport:
    """Test report serialization."""

    def test_verdicts(self):
        report = RunReport(command="test", assertions=[
            Assertion.at_most("small", 1e-12, 1e-10),
            Assertion.exact("flag", False, "mismatch"),
        ])
        assert not report.passed
        assert [a.name for a in report.failures()] == ["flag"]

    def test_json(self):
        report = RunReport(command="test", residuals={"x": 1e-13}, assertions=[Assertion.at_most("x", 1e-13, 1e-10)])
        data = json.loads(report.to_json())
        assert data["passed"] is True
        restored = RunReport.model_validate(data)
        assert restored.assertions[0].threshold == 1e-10
        assert restored.passed


class TestTracking:
    """Test MLflow logging of a report with mlflow mocked out."""

    @pytest.fixture
    def fake_mlflow(self, monkeypatch):
        fake = MagicMock()
        fake.start_run.return_value.info.run_id = "run-1"
        monkeypatch.setattr(mlflow_tracker, "mlflow", fake)
        return fake

    def test_log_report(self, fake_mlflow):
        tracker = mlflow_tracker.MLflowTracker(TrackingSettings(tracking_uri="file:/tmp/runs"))
        assert tracker.start_run(run_name="unit") == "run-1"
        report = RunReport(command="check all", parameters={"theta": {"eps": 1e-14}}, assertions=[
            Assertion.at_most("theta.split", 1e-12, 1e-10),
            Assertion.exact("covers.broken.cover", False),
        ])
        tracker.log_report(report)
        tracker.end_run()

        fake_mlflow.set_experiment.assert_called_once_with("lamekit-checks")
        fake_mlflow.log_params.assert_called_once_with({"theta.eps": "1e-14"})
        metrics = fake_mlflow.log_metrics.call_args[0][0]
        assert metrics["theta.split.value"] == 1e-12
        assert metrics["covers.broken.cover.passed"] == 0
        assert metrics["passed"] == 0
        fake_mlflow.log_text.assert_called_once_with("covers.broken.cover", artifact_file="failures.txt")

    def test_end_run_failure_is_logged(self, fake_mlflow):
        fake_mlflow.end_run.side_effect = RuntimeError("no active run")
        tracker = mlflow_tracker.MLflowTracker(TrackingSettings())
        tracker.end_run()

    def test_run_url(self, fake_mlflow):
        tracker = mlflow_tracker.MLflowTracker(TrackingSettings(tracking_uri="http://localhost:5000"))
        assert tracker.get_run_url("abc").endswith("/runs/abc")
