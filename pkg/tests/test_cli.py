import io
import json

import pytest

from collapseheat.cli import EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED, run_cli


def run(*argv):
    buf = io.StringIO()
    code = run_cli(list(argv), stdout=buf)
    return code, (json.loads(buf.getvalue()) if buf.getvalue() else None)


def test_heat_csl():
    code, out = run("heat", "--model", "csl", "--lambda", "1e-16", "--rc", "1e-7")
    assert code == EXIT_OK
    assert out["P_heat_W"] == pytest.approx(4.979865032271931e13, rel=1e-12)
    assert out["constants"] == "codata"


def test_equilibrium_dp_and_profile():
    code, out = run("--constants", "paper", "equilibrium", "--model", "dp", "--rc", "1e-7")
    assert code == EXIT_OK and out["constants"] == "paper"
    assert 1 < out["T_eq_K"] < 100
    code, out2 = run("equilibrium", "--model", "dp", "--rc", "1e-7", "--constants", "codata")
    assert out2["T_eq_K"] == pytest.approx(10.393165698332789, rel=1e-12)


def test_bound_commands():
    code, out = run("bound", "dp", "--temperature", "2.8e5")
    assert code == EXIT_OK and out["window_open"] is True
    assert out["rc_min_m"] == pytest.approx(1.2381875321924584e-13, rel=1e-12)
    code, out = run("bound", "csl", "--temperature", "300", "--rc", "1e-7")
    assert out["lambda_crit_per_s"] == pytest.approx(1.1590148890149585e-18, rel=1e-12)
    code, out = run("bound", "csl", "--temperature", "300", "--rc-grid", "1e-8:1e-6:5")
    assert code == EXIT_OK and len(out["samples"]) == 5


def test_observe():
    code, out = run("observe", "--magnitude", "23", "--area", "disk")
    assert code == EXIT_OK
    assert out["luminosity_W"] == pytest.approx(4.752388516279722e18, rel=1e-12)
    assert out["temperature_K"] == pytest.approx(22726.763370994406, rel=1e-12)
    assert "bolometric" in out["assumptions"]["photometry"]


def test_diagram(tmp_path):
    svg, table = tmp_path / "d.svg", tmp_path / "d.csv"
    code, out = run("diagram", "--out", str(svg), "--csv", str(table), "--rc-grid", "1e-9:1e-3:20")
    assert code == EXIT_OK and out["samples"] == 100
    assert svg.read_text().startswith("<?xml") and table.read_text().startswith("scenario,")


def test_verify_kernels(capsys):
    code, out = run("verify", "kernels")
    assert code == EXIT_OK and out["passed"] and len(out["kernels"]["reports"]) == 12
    assert "fourier_quadrature" in capsys.readouterr().err


def test_verify_simulator_failure_exit_code():
    # a grid too coarse for r_c is rejected before running
    code, out = run("verify", "simulator", "--grid", "64")
    assert code == EXIT_INVALID and out is None


def test_verify_failure_code_is_distinct():
    assert EXIT_VERIFY_FAILED not in (EXIT_OK, EXIT_INVALID)


@pytest.mark.parametrize("argv", [
    ["heat", "--model", "csl", "--rc", "1e-7"],
    ["heat", "--model", "csl", "--lambda", "0", "--rc", "1e-7"],
    ["heat", "--model", "csl", "--lambda", "1e-16", "--rc", "-1"],
    ["bound", "csl", "--temperature", "-5"],
    ["bound", "csl", "--temperature", "5", "--rc-grid", "1e-3:1e-9:10"],
    ["observe", "--magnitude", "23", "--distance-pc", "0"],
    ["diagram", "--out", "/nonexistent/dir/x.svg"],
    ["bogus"],
    [],
])
def test_invalid_input_exit_1(argv, capsys):
    code, out = run(*argv)
    assert code == EXIT_INVALID
    assert out is None
    assert "error" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run_cli(["--help"], stdout=io.StringIO()) == EXIT_OK
