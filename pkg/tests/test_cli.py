"""
Tests for the curvature-lab command line.
Run with: pytest tests/test_cli.py -v
"""

import csv
import io
import json
import math
from unittest.mock import patch

import pytest
from celery.exceptions import TimeoutError as CeleryTimeoutError
from kombu.exceptions import OperationalError

from app.cli import RunConfig, build_parser, main
from app.reporting import Report


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestEigenCommand:
    """Test cases for `curvature-lab eigen`"""

    def test_flat_ground_state(self, capsys):
        """Test eigen reports pi^2 with small shooting and normalization errors"""
        code, out, _ = run_cli(capsys, "eigen", "--K", "0", "--r0", "1", "--n", "1")
        row = csv_rows(out)[0]

        assert code == 0
        assert float(row["lambda"]) == pytest.approx(math.pi**2, rel=1e-11)
        assert float(row["rel_error"]) < 1e-8
        assert float(row["norm_error"]) < 1e-8

    def test_hyperbolic_second_mode(self, capsys):
        """Test eigen for K=-1, r0=pi, n=2 gives lambda = 5"""
        code, out, _ = run_cli(capsys, "eigen", "--K", "-1", "--r0", str(math.pi), "--n", "2")
        row = csv_rows(out)[0]

        assert code == 0
        assert float(row["lambda"]) == pytest.approx(5.0, rel=1e-11)
        assert float(row["rel_error"]) < 1e-8

    def test_radius_beyond_antipode(self, capsys):
        """Test a radius past the antipode exits with 2 and prints nothing on stdout"""
        code, out, err = run_cli(capsys, "eigen", "--K", "1", "--r0", "3.2")

        assert code == 2
        assert out == ""
        assert "error" in err

    def test_non_convergence_exits_one(self, capsys):
        """Test a ConvergenceError from the shooting oracle exits with 1"""
        with patch("app.numerics.shooting.MAX_SCAN_STEPS", 1):
            code, _, _ = run_cli(capsys, "eigen", "--K", "0", "--r0", "1", "--n", "3")

        assert code == 1

    def test_missing_radius(self, capsys):
        """Test a missing required argument exits with 2"""
        code, _, _ = run_cli(capsys, "eigen", "--K", "0")

        assert code == 2


class TestBoundCommand:
    """Test cases for `curvature-lab bound`"""

    def test_default_table(self, capsys):
        """Test bound with no options emits 600 rows for the three default curves"""
        code, out, _ = run_cli(capsys, "bound")
        lines = out.splitlines()

        assert code == 0
        assert lines[0] == "K,r,sigma_p_min,product"
        assert len(lines) == 601

    def test_byte_identical_output(self, tmp_path):
        """Test two runs with the same configuration write identical bytes"""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"

        assert main(["bound", "--output", str(first)]) == 0
        assert main(["bound", "--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_flat_at_pi(self, capsys):
        """Test the flat bound is 1 at r = pi"""
        code, out, _ = run_cli(capsys, "bound", "--K=0", "--r-min", str(math.pi), "--r-max", str(math.pi), "--steps", "1")

        assert code == 0
        assert csv_rows(out)[0]["sigma_p_min"] == "1"

    def test_twelve_significant_digits(self, capsys):
        """Test numbers are written with 12 significant digits"""
        _, out, _ = run_cli(capsys, "bound", "--K=-1", "--steps", "3")

        assert csv_rows(out)[0]["r"] == "0.05"
        assert csv_rows(out)[1]["r"] == "1.59579632679"

    def test_json_metadata(self, capsys):
        """Test JSON output carries asymptotes and equators in its metadata"""
        code, out, _ = run_cli(capsys, "bound", "--K=1,0,-1", "--steps", "5", "--format", "json")
        payload = json.loads(out)

        assert code == 0
        assert payload["metadata"]["asymptotes"] == {"-1": 1.0}
        assert payload["metadata"]["equators"]["1"] == pytest.approx(math.pi / 2)
        assert payload["metadata"]["config"]["K"] == [1.0, 0.0, -1.0]
        assert "output" not in payload["metadata"]["config"]
        assert len(payload["rows"]) == 15
        assert set(payload["rows"][0]) == {"K", "r", "sigma_p_min", "product"}

    def test_empty_clipped_range(self, capsys):
        """Test a range that clips to nothing on the sphere exits with 2"""
        code, _, _ = run_cli(capsys, "bound", "--K=1", "--r-min", "4", "--r-max", "5")

        assert code == 2

    def test_bad_curvature_list(self, capsys):
        """Test an unparsable curvature list exits with 2"""
        code, _, _ = run_cli(capsys, "bound", "--K=1,x")

        assert code == 2


class TestOtherCommands:
    """Test cases for volume, trial, schwarzschild and sweep"""

    def test_volume_closes_sphere(self, capsys):
        """Test the volume table ends at the antipode with 2 pi^2"""
        code, out, _ = run_cli(capsys, "volume", "--K=1", "--r-max", "4", "--steps", "11")
        rows = csv_rows(out)

        assert code == 0
        assert float(rows[0]["ball_volume"]) == 0.0
        assert float(rows[-1]["r"]) == pytest.approx(math.pi)
        assert float(rows[-1]["ball_volume"]) == pytest.approx(2 * math.pi**2, rel=1e-11)

    def test_trial_requires_seed(self, capsys):
        """Test trial without a seed exits with 2"""
        code, _, _ = run_cli(capsys, "trial", "--K", "-1", "--r0", "2")

        assert code == 2

    def test_trial(self, capsys):
        """Test trial rows for consecutive seeds respect the variational bound"""
        code, out, _ = run_cli(capsys, "trial", "--K", "-1", "--r0", "2", "--seed", "5", "--count", "3")
        rows = csv_rows(out)

        assert code == 0
        assert [row["seed"] for row in rows] == ["5", "6", "7"]
        for row in rows:
            assert float(row["ratio"]) >= 1 - 1e-9
            assert float(row["sigma_p"]) >= float(row["sigma_p_min"]) * (1 - 1e-9)
            assert float(row["sigma_p_laplacian"]) == pytest.approx(float(row["sigma_p"]), rel=1e-5)

    def test_schwarzschild_natural(self, capsys):
        """Test natural units give a minimum Schwarzschild radius of 2"""
        code, out, _ = run_cli(capsys, "schwarzschild")
        values = {row["quantity"]: row["value"] for row in csv_rows(out)}

        assert code == 0
        assert values["min_schwarzschild_radius"] == "2"
        assert values["sigma_p_min"] == "2"
        assert float(values["geodesic_radius_numeric"]) == pytest.approx(math.pi / 2, rel=1e-6)
        assert values["self_consistent"] == "false"

    def test_schwarzschild_si(self, capsys):
        """Test SI units give 2 l_P in metres"""
        code, out, _ = run_cli(capsys, "schwarzschild", "--hbar-mode", "si", "--format", "json")
        values = {row["quantity"]: row["value"] for row in json.loads(out)["rows"]}

        assert code == 0
        assert values["min_schwarzschild_radius"] == pytest.approx(3.23e-35, rel=1e-3)
        assert values["self_consistent"] is True

    @pytest.mark.parametrize("r_s", ["0", "-1"])
    def test_schwarzschild_invalid_radius(self, capsys, r_s):
        """Test a non-positive horizon radius exits with 2"""
        code, _, _ = run_cli(capsys, "schwarzschild", "--r-s", r_s)

        assert code == 2

    def test_sweep_flat(self, capsys):
        """Test a hinted flat sweep agrees with the closed form on every radius"""
        code, out, _ = run_cli(capsys, "sweep", "--K=0", "--modes", "1", "--hinted")
        rows = csv_rows(out)

        assert code == 0
        assert len(rows) == 5
        assert all(float(row["rel_error"]) < 1e-8 for row in rows)
        assert all(row["error"] == "" for row in rows)


class TestVerifyCommand:
    """Test cases for `curvature-lab verify` with the task layer patched"""

    @staticmethod
    def result(name, passed):
        return {"name": name, "label": name, "passed": passed, "worst_residual": 1e-12, "detail": ""}

    @patch("app.cli.run_tasks")
    def test_all_pass(self, mock_run_tasks, capsys):
        """Test verify exits with 0 when every check passes"""
        mock_run_tasks.return_value = [self.result("sharpness", True), self.result("reilly", True)]

        code, out, _ = run_cli(capsys, "verify", "--trials", "10")

        assert code == 0
        assert [row["passed"] for row in csv_rows(out)] == ["true", "true"]
        plan = mock_run_tasks.call_args[0][1]
        assert ("variational", {"seed": 42, "trials": 10}) in plan
        assert mock_run_tasks.call_args[0][2] == "local"

    @patch("app.cli.run_tasks")
    def test_failure_exits_one(self, mock_run_tasks, capsys):
        """Test verify exits with 1 when any check fails"""
        mock_run_tasks.return_value = [self.result("sharpness", True), self.result("variational", False)]

        code, out, _ = run_cli(capsys, "verify", "--format", "json")

        assert code == 1
        assert json.loads(out)["metadata"]["failed"] == ["variational"]

    @patch("app.cli.run_tasks")
    def test_celery_backend_selected(self, mock_run_tasks, capsys):
        """Test --backend celery is passed through to the task runner"""
        mock_run_tasks.return_value = []

        run_cli(capsys, "verify", "--backend", "celery")

        assert mock_run_tasks.call_args[0][2] == "celery"

    @pytest.mark.parametrize("error", [OperationalError("connection refused"), CeleryTimeoutError("group timed out")])
    @patch("app.cli.run_tasks")
    def test_backend_failure_exits_one(self, mock_run_tasks, error, capsys):
        """Test an unreachable broker or a timed-out group exits with 1"""
        mock_run_tasks.side_effect = error

        code, out, err = run_cli(capsys, "verify", "--backend", "celery")

        assert code == 1
        assert out == ""
        assert err != ""

    def test_invalid_tolerance(self, capsys):
        """Test a non-positive tolerance exits with 2"""
        code, _, _ = run_cli(capsys, "verify", "--tolerance", "0")

        assert code == 2


class TestParser:
    """Test cases for argument parsing and RunConfig"""

    def test_run_config_from_namespace(self):
        """Test RunConfig wraps a single curvature in a tuple and leaves output out of its echo"""
        args = build_parser().parse_args(["eigen", "--K", "-1", "--r0", "2", "--n", "3"])
        run = RunConfig.from_namespace(args)

        assert run.command == "eigen"
        assert run.K == (-1.0,)
        assert run.n == 3
        assert "output" not in run.echo()

    def test_unknown_command(self, capsys):
        """Test an unknown sub-command exits with 2"""
        code, _, _ = run_cli(capsys, "plot")

        assert code == 2

    def test_version(self, capsys):
        """Test --version exits with 0 and names the program"""
        code, out, _ = run_cli(capsys, "--version")

        assert code == 0
        assert "curvature-lab" in out

    def test_report_rejects_unknown_column(self):
        """Test Report.add_row refuses columns it does not declare"""
        report = Report(columns=("a",))

        with pytest.raises(KeyError):
            report.add_row(b=1)

    def test_json_non_finite_is_null(self):
        """Test non-finite numbers are written as JSON null"""
        report = Report(columns=("x",))
        report.add_row(x=math.inf)

        assert json.loads(report.to_json())["rows"] == [{"x": None}]
