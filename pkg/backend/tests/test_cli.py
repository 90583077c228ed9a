import csv
import io
import json

import pytest

from app.export import EXACT_COLUMNS
from app.schemas import CheckResult, ConvergenceRow


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def convergence_rows(errors):
    return [
        ConvergenceRow(
            s=s, r=s, neg_log_T_over_s2=e, sigma_limit=0.0, abs_error=e,
            route="exact", precision_bits=0,
        )
        for s, e in zip((1, 2, 4), errors)
    ]


class TestExactCommand:
    """pentatile exact"""

    def test_tdefp(self, invoke):
        result = invoke("exact", "--tdefp", "-r", 3, "-s", 1, "--alpha", "1/2")
        assert result.exit_code == 0
        assert result.stdout == (
            "quantity,parameters,fraction,decimal\n"
            "T,r=3 s=1 alpha=1/2,7/8,0.875\n"
        )

    def test_empty_corner(self, invoke):
        result = invoke("exact", "--tdefp", "-r", 3, "-s", 0, "--alpha", "1/2")
        assert result.exit_code == 0
        assert read_csv(result.stdout)[0]["fraction"] == "1"

    def test_partition_function(self, invoke):
        result = invoke("exact", "--z", "-N", 4, "--rho", 2, "--alpha", "1/2")
        assert result.exit_code == 0
        row = read_csv(result.stdout)[0]
        assert row["fraction"] == "1024"
        assert row["decimal"] == "1024"

    def test_gefp_decimal_alpha(self, invoke):
        result = invoke("exact", "--gefp", "-N", 2, "--r-list", "1", "--alpha", "0.25")
        assert result.exit_code == 0
        assert read_csv(result.stdout)[0]["fraction"] == "3/4"

    def test_crs(self, invoke):
        result = invoke("exact", "--crs", "-r", 3, "-s", 2)
        assert read_csv(result.stdout)[0]["fraction"] == "14"

    def test_irrational_pentagon(self, invoke):
        result = invoke("exact", "--pentagon", "-r", 3, "-s", 1, "--rho", 1, "--alpha", "1/2")
        assert result.exit_code == 2
        assert "precision" in result.stderr
        result = invoke(
            "exact", "--pentagon", "-r", 3, "-s", 1, "--rho", 1, "--alpha", "1/2",
            "--precision", 128,
        )
        assert result.exit_code == 0
        row = read_csv(result.stdout)[0]
        assert row["fraction"] == ""
        assert row["decimal"].startswith("1.23743686707645")

    def test_json(self, invoke):
        result = invoke("exact", "--tdefp", "-r", 3, "-s", 1, "--alpha", "1/2", "--format", "json")
        body = json.loads(result.stdout)
        assert body["meta"]["command"] == "exact"
        assert body["meta"]["columns"] == EXACT_COLUMNS
        assert body["meta"]["parameters"]["alpha"] == "1/2"
        assert body["rows"] == [
            {"quantity": "T", "parameters": "r=3 s=1 alpha=1/2", "fraction": "7/8", "decimal": "0.875"}
        ]

    def test_out_file(self, invoke, tmp_path):
        target = tmp_path / "t.csv"
        result = invoke("exact", "--tdefp", "-r", 2, "-s", 1, "--alpha", "1/2", "--out", target)
        assert result.exit_code == 0
        assert result.stdout == ""
        assert target.read_text().endswith("3/4,0.75\n")

    @pytest.mark.parametrize(
        "args",
        [
            ("--tdefp", "-r", 3, "-s", 1, "--alpha", "1"),
            ("--tdefp", "-r", 3, "-s", 1, "--alpha", "0.12345678901234567"),
            ("--tdefp", "-r", 3, "-s", 1),
            ("-r", 3, "-s", 1, "--alpha", "1/2"),
            ("--tdefp", "-r", 0, "-s", 1, "--alpha", "1/2"),
        ],
    )
    def test_usage_errors(self, invoke, args):
        result = invoke("exact", *args)
        assert result.exit_code == 2
        assert result.stderr.startswith("error:")

    def test_determinant_route_ignores_term_cap(self, invoke, monkeypatch):
        monkeypatch.setenv("PENTATILE_TERM_CAP", "1")
        result = invoke("exact", "--g", "-r", 3, "-s", 2, "--alpha", "1")
        assert result.exit_code == 0

    def test_bad_environment(self, invoke, monkeypatch):
        monkeypatch.setenv("PENTATILE_NMAX", "many")
        result = invoke("exact", "--tdefp", "-r", 3, "-s", 1, "--alpha", "1/2")
        assert result.exit_code == 2


class TestOracleCommand:
    """pentatile oracle"""

    def test_count(self, invoke):
        result = invoke("oracle", "--count", "-N", 5)
        assert result.exit_code == 0
        assert read_csv(result.stdout) == [
            {"N": "5", "configurations": "429", "asm_count": "429", "status": "PASS"}
        ]

    def test_all_gefp(self, invoke):
        result = invoke("oracle", "--all-gefp", "-N", 4, "--alpha", "1/2")
        assert result.exit_code == 0
        rows = read_csv(result.stdout)
        assert len(rows) == 69
        assert {row["status"] for row in rows} == {"PASS"}

    def test_single_vertex(self, invoke):
        result = invoke("oracle", "--all-gefp", "-N", 1, "--alpha", "1/3")
        assert result.exit_code == 0
        rows = read_csv(result.stdout)
        assert len(rows) == 1
        assert rows[0]["status"] == "PASS"

    def test_partition_function(self, invoke):
        result = invoke("oracle", "--z", "-N", 4, "--alpha", "1/2", "--rho", 2)
        assert result.exit_code == 0
        assert read_csv(result.stdout)[0]["status"] == "PASS"

    def test_size_cap(self, invoke):
        result = invoke("oracle", "--count", "-N", 9)
        assert result.exit_code == 3
        assert "PENTATILE_NMAX" in result.stderr

    def test_needs_alpha(self, invoke):
        assert invoke("oracle", "--all-gefp", "-N", 3).exit_code == 2

    def test_failure_exit_code(self, invoke, mocker):
        mocker.patch("app.services.gefp.gefp_det", return_value=0)
        result = invoke("oracle", "--all-gefp", "-N", 2, "--alpha", "1/2")
        assert result.exit_code == 1
        assert "FAILED" in result.stderr


class TestAsymCommand:
    """pentatile asym"""

    def test_report(self, invoke):
        result = invoke("asym", "--alpha", "0.25", "--omega", "0.5")
        assert result.exit_code == 0
        row = read_csv(result.stdout)[0]
        assert row["scenario"] == "I"
        assert float(row["theta_c"]) == pytest.approx(3.0)
        assert float(row["sigma"]) == 0.0
        assert float(row["jump"]) == pytest.approx(64 / 3)

    def test_theta_input(self, invoke):
        result = invoke("asym", "--alpha", "0.25", "--theta", "2", "--format", "json")
        row = json.loads(result.stdout)["rows"][0]
        assert row["scenario"] == "II"
        assert row["omega"] == pytest.approx(2 / 3)

    def test_needs_coordinate(self, invoke):
        assert invoke("asym", "--alpha", "0.25").exit_code == 2

    def test_alpha_domain(self, invoke):
        assert invoke("asym", "--alpha", "1.5", "--omega", "0.5").exit_code == 2


class TestScanCommand:
    """pentatile scan"""

    def test_sigma(self, invoke):
        result = invoke("scan", "--kind", "sigma", "--alpha", "0.25", "--points", 5)
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "omega,alpha,omega_c,sigma,scenario"
        assert len(lines) == 6
        rows = read_csv(result.stdout)
        assert float(rows[0]["omega"]) == pytest.approx(0.01)
        assert rows[0]["scenario"] == "I"
        assert rows[-1]["scenario"] == "II"

    @pytest.mark.parametrize("kind", ["free-energy", "phi", "endpoints"])
    def test_kinds(self, invoke, kind):
        result = invoke("scan", "--kind", kind, "--alpha", "0.5", "--points", 4)
        assert result.exit_code == 0
        assert len(read_csv(result.stdout)) == 4

    def test_endpoints_freeze_past_critical_theta(self, invoke):
        result = invoke("scan", "--kind", "endpoints", "--alpha", "0.25", "--start", 3, "--stop", 4, "--points", 2)
        assert result.exit_code == 0
        for row in read_csv(result.stdout):
            assert row["scenario"] == "I"
            assert float(row["b"]) == pytest.approx(3.0)

    def test_density(self, invoke):
        result = invoke("scan", "--kind", "density", "--alpha", "0.25", "--theta", "2", "--points", 6)
        assert result.exit_code == 0
        for row in read_csv(result.stdout):
            assert 0 <= float(row["density"]) <= 1

    def test_density_needs_theta(self, invoke):
        assert invoke("scan", "--kind", "density", "--alpha", "0.25").exit_code == 2

    def test_deterministic(self, invoke):
        args = ("scan", "--kind", "phi", "--alpha", "0.3", "--points", 20, "--threads", 4)
        assert invoke(*args).stdout == invoke(*args).stdout

    @pytest.mark.parametrize("kind,extra", [("sigma", ()), ("density", ("--theta", "2"))])
    def test_worker_processes_match_serial(self, invoke, kind, extra):
        args = ("scan", "--kind", kind, "--alpha", "0.25", "--points", 12, *extra)
        serial = invoke(*args, "--threads", 1)
        pooled = invoke(*args, "--threads", 3)
        assert serial.exit_code == pooled.exit_code == 0
        assert pooled.stdout == serial.stdout


class TestConvergeCommand:
    """pentatile converge"""

    def test_table(self, invoke):
        result = invoke("converge", "--alpha", "1/2", "--omega", "3/10", "--s-list", "1,2")
        assert result.exit_code == 0
        rows = read_csv(result.stdout)
        assert [row["s"] for row in rows] == ["1", "2"]
        assert rows[0]["r"] == "3"
        assert rows[0]["route"] == "exact"

    def test_assert_passes(self, invoke, mocker):
        mocker.patch("app.cli.converge.convergence_table", return_value=convergence_rows([0.3, 0.2, 0.1]))
        result = invoke("converge", "--alpha", "1/2", "--omega", "1/2", "--s-list", "1,2,4", "--assert")
        assert result.exit_code == 0

    def test_assert_fails(self, invoke, mocker):
        mocker.patch("app.cli.converge.convergence_table", return_value=convergence_rows([0.3, 0.4, 0.1]))
        result = invoke("converge", "--alpha", "1/2", "--omega", "1/2", "--s-list", "1,2,4", "--assert")
        assert result.exit_code == 1
        assert "abs_error" in result.stderr

    def test_flag_warning(self, invoke, mocker):
        rows = convergence_rows([0.3])
        rows[0] = rows[0].model_copy(update={"flag": "loss-of-significance", "route": "float"})
        mocker.patch("app.cli.converge.convergence_table", return_value=rows)
        result = invoke("converge", "--alpha", "1/2", "--omega", "1/2", "--s-list", "1")
        assert result.exit_code == 0
        assert "loss-of-significance" in result.stderr
        assert read_csv(result.stdout)[0]["flag"] == "loss-of-significance"

    def test_empty_list(self, invoke):
        assert invoke("converge", "--alpha", "1/2", "--omega", "1/2", "--s-list", ",").exit_code == 2


class TestSelftestCommand:
    """pentatile selftest"""

    def test_report(self, invoke, mocker):
        results = [
            CheckResult(suite="oracle", check="configuration counts", passed=True, detail="N<=4"),
            CheckResult(suite="limits", check="alpha -> 0 exact", passed=True, detail="ok"),
        ]
        mocker.patch("app.cli.selftest.run_selftest", return_value=(results, {"oracle": 0.5}))
        result = invoke("selftest", "--quick")
        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "PASS oracle: configuration counts (N<=4)",
            "PASS limits: alpha -> 0 exact (ok)",
            "2/2 checks passed",
        ]
        assert "oracle: 0.50s" in result.stderr

    def test_failure(self, invoke, mocker):
        results = [CheckResult(suite="oracle", check="vertex pairing", passed=False, detail="bad")]
        mocker.patch("app.cli.selftest.run_selftest", return_value=(results, {}))
        result = invoke("selftest")
        assert result.exit_code == 1
        assert result.stdout.startswith("FAIL oracle: vertex pairing")

    @pytest.mark.slow
    def test_quick_run(self, invoke):
        result = invoke("selftest", "--quick", "--seed", 7)
        assert result.exit_code == 0, result.stdout
