import json
import numpy as np
import pytest

from scipy.constants import c, hbar

from pycasimir import SurfaceProfile
from pycasimir.cli import (EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_IO, EXIT_OK,
                           main, parse_grid, parse_indices)
from pycasimir.errors import BetaIndexError, ConfigError, ConvergenceError


def _run_json(capsys, *argv):
    assert main([*argv, "--format", "json", "--jobs", "2"]) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_parse_grid():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("0.5, 2 inf") == [0.5, 2.0, float("inf")]
    assert parse_grid("") == []
    with pytest.raises(ConfigError):
        parse_grid("0:1")
    with pytest.raises(ConfigError):
        parse_grid("1,x")


def test_parse_indices():
    assert len(parse_indices("all")) == 11
    assert [(i.p, i.q) for i in parse_indices("0,1;4_2 3")] == [(0, 1), (4, 2),
                                                               (3, 1)]
    with pytest.raises(BetaIndexError):
        parse_indices("1,1")


def test_beta_table(capsys):
    assert main(["beta-table", "--xi", "0,1", "--indices", "0,1;4,2"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()

    assert lines[0] == "p,q,xi,beta"
    assert lines[1] == "0,1,0,0.125"
    assert lines[3] == "4,2,0,-0.015625"
    assert len(lines) == 5


def test_beta_table_empty_grid(capsys):
    assert main(["beta-table", "--xi", ""]) == EXIT_OK
    assert capsys.readouterr().out == "p,q,xi,beta\n"


def test_beta_table_invalid(capsys):
    assert main(["beta-table", "--xi=-1,2"]) == EXIT_CONFIG
    assert main(["beta-table", "--indices", "2,4"]) == EXIT_CONFIG


def test_matsubara_curves(capsys):
    rows = _run_json(capsys, "matsubara-curves", "--tau-grid", "0.5,16",
                     "--indices", "0,1")
    assert [r["tau"] for r in rows] == [0.5, 16.0]

    # Classical asymptote beta(0) tau / (2 * integral)
    assert rows[1]["beta_tilde_over_T0"] == pytest.approx(4.0, rel=1e-6)
    assert rows[1]["beta_tilde"] == pytest.approx(1.0, rel=1e-6)


def test_matsubara_curves_requires_positive_tau(capsys):
    assert main(["matsubara-curves", "--tau-grid", "0,1"]) == EXIT_CONFIG


def test_potential_room_temperature(capsys):
    report = _run_json(capsys, "potential", "--d-nm", "1000",
                       "--temperature", "300")

    assert report["dimensionless"]["tau"] == pytest.approx(0.82317, rel=1e-4)
    assert report["inputs"]["alpha_nm3"] == np.eye(3).tolist()
    assert report["breakdown"]["unit"] == "hbar_c/(pi d^4)"
    assert report["energy"]["joules"] < 0.0
    assert report["energy"]["kelvin"] == pytest.approx(
        report["energy"]["joules"] / 1.380649e-23, rel=1e-12)
    assert report["warnings"] == []


def test_potential_tau_only(capsys):
    report = _run_json(capsys, "potential", "--tau", "0.5", "--d-nm", "200")
    reduced = report["energy"]["U_d4_over_hbar_c_nm3"]
    assert reduced < 0.0

    # U = reduced * hbar c / d^4 with alpha = 1 nm^3
    hbar_c = hbar * c
    assert report["energy"]["joules"] == pytest.approx(
        reduced * hbar_c * 1e-27 / (200e-9) ** 4, rel=1e-12)
    assert report["energy"]["kelvin"] == pytest.approx(
        report["energy"]["joules"] / 1.380649e-23, rel=1e-12)


def test_potential_zero_temperature(capsys):
    report = _run_json(capsys, "potential", "--temperature", "0")
    assert report["breakdown"]["terms"]["flat"] == pytest.approx(-0.375,
                                                                 rel=1e-10)


def test_potential_methods_agree_at_low_tau(capsys):
    common = ["potential", "--tau", "0.05", "--profile", "sphere",
              "--radius-nm", "2000", "--alpha", "1.5,1,0.5"]
    full = _run_json(capsys, *common)
    retarded = _run_json(capsys, *common, "--method", "retarded")

    assert retarded["breakdown"]["total"] == pytest.approx(
        full["breakdown"]["total"], rel=1e-7)


def test_potential_classical(capsys):
    report = _run_json(capsys, "potential", "--tau", "2", "--method",
                       "classical", "--profile", "cylinder",
                       "--radius-nm", "1000")
    assert report["breakdown"]["unit"] == "k_B T/d^3"
    assert report["dimensionless"]["d_over_R1"] == pytest.approx(0.0)
    assert report["dimensionless"]["d_over_R2"] == pytest.approx(0.1)
    assert report["energy"]["U_d4_over_hbar_c_nm3"] == pytest.approx(
        report["breakdown"]["total"] / np.pi, rel=1e-14)


def test_potential_csv(capsys):
    assert main(["potential", "--tau", "0"]) == EXIT_OK
    header, *lines = capsys.readouterr().out.splitlines()
    assert header == "key,value"

    values = dict(line.split(",", 1) for line in lines)
    assert float(values["breakdown.terms.flat"]) == pytest.approx(-0.375,
                                                                  rel=1e-10)
    assert values["breakdown.validity.tau_in_range"] == "1"
    assert values["inputs.alpha_nm3.0.0"] == "1"


def test_potential_warns(capsys):
    report = _run_json(capsys, "potential", "--tau", "0", "--profile",
                       "sphere", "--radius-nm", "150")
    assert len(report["warnings"]) == 1
    assert report["breakdown"]["validity"]["curvature_in_range"] is False


@pytest.mark.parametrize("argv", [
    ["potential", "--temperature", "300", "--tau", "0.1"],
    ["potential"],
    ["potential", "--tau", "0.1,0.2"],
    ["potential", "--tau", "0.1", "--d-nm", "-5"],
    ["potential", "--tau", "0.1", "--alpha", "1,2"],
    ["potential", "--tau", "0.1", "--profile", "grid"],
    ["potential", "--tau", "0.1", "--tol", "0.5"]])
def test_potential_config_errors(capsys, argv):
    assert main(argv) == EXIT_CONFIG


def test_potential_convergence_failure(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("Matsubara sum did not converge",
                               estimate=-0.3, terms_used=10)

    monkeypatch.setattr("pycasimir.cli.u_full", fail)
    assert main(["potential", "--tau", "0.1"]) == EXIT_CONVERGENCE
    assert capsys.readouterr().out == ""


def test_config_file(capsys, tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("d-nm = 1000\ntemperature = 300\nprofile = sphere\n"
                      "radius_nm = 5000\n")

    report = _run_json(capsys, "potential", "--config", str(config))
    assert report["inputs"]["d_nm"] == 1000.0
    assert report["dimensionless"]["d_over_R1"] == pytest.approx(0.2)

    # Command-line flags override the file
    report = _run_json(capsys, "potential", "--config", str(config),
                       "--d-nm", "500")
    assert report["inputs"]["d_nm"] == 500.0
    assert report["dimensionless"]["d_over_R1"] == pytest.approx(0.1)


def test_config_file_unknown_key(capsys, tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("separation = 100\n")
    assert main(["potential", "--config", str(config)]) == EXIT_CONFIG


def test_output_file(capsys, tmp_path):
    argv = ["beta-table", "--xi", "0:5:11", "--indices", "all"]
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    assert main([*argv, "--output", str(first)]) == EXIT_OK
    assert main([*argv, "--output", str(second), "--jobs", "1"]) == EXIT_OK

    assert capsys.readouterr().out == ""
    assert first.read_bytes() == second.read_bytes()
    assert len(first.read_text().splitlines()) == 1 + 11 * 11

    metadata = json.loads((tmp_path / "first.csv.meta.json").read_text())
    assert metadata["command"][0] == "beta-table"
    assert "version" in metadata
    assert metadata["config"]["indices"][:2] == ["(0,1)", "(0,2)"]
    assert len(metadata["config"]["indices"]) == 11
    assert "command_parser" not in metadata["config"]


def test_output_file_matsubara_curves(capsys, tmp_path):
    output = tmp_path / "curves.json"
    assert main(["matsubara-curves", "--tau-grid", "1,2", "--indices", "4,2",
                 "--format", "json", "--output", str(output)]) == EXIT_OK

    assert len(json.loads(output.read_text())) == 2
    metadata = json.loads((tmp_path / "curves.json.meta.json").read_text())
    assert metadata["config"]["indices"] == ["(4,2)"]
    assert metadata["config"]["tau_grid"] == [1.0, 2.0]


def test_orientation_scan(capsys):
    rows = _run_json(capsys, "orientation-scan", "--temperature", "300,600",
                     "--d-nm", "500", "--profile", "cylinder",
                     "--radius-nm", "5000", "--alpha", "2,1,1",
                     "--phi-grid", "0:3.141592653589793:13")
    assert len(rows) == 26

    for tau in sorted({r["tau"] for r in rows}):
        block = [r for r in rows if r["tau"] == tau]
        assert len(block) == 13
        assert sum(r["is_min"] for r in block) == 1
        assert next(r for r in block if r["is_min"])["phi"] == pytest.approx(
            0.5 * np.pi)


def _write_grid(path, header):
    profile = SurfaceProfile.sphere(1000.0).sample(10.0, 4)
    np.savetxt(path, profile.values, header=header, comments="")


def test_height_grid(capsys, tmp_path):
    path = tmp_path / "heights.txt"
    _write_grid(path, "# spacing_nm=10")

    report = _run_json(capsys, "potential", "--tau", "0", "--d-nm", "100",
                       "--profile", "grid", "--height-grid", str(path))
    assert report["dimensionless"]["d_over_R1"] == pytest.approx(0.1,
                                                                 rel=1e-4)
    assert report["dimensionless"]["d_over_R2"] == pytest.approx(0.1,
                                                                 rel=1e-4)


def test_height_grid_bad_header(capsys, tmp_path):
    path = tmp_path / "heights.txt"
    _write_grid(path, "# spacing=10")
    assert main(["potential", "--tau", "0", "--profile", "grid",
                 "--height-grid", str(path)]) == EXIT_CONFIG


def test_height_grid_missing(capsys, tmp_path):
    assert main(["potential", "--tau", "0", "--profile", "grid",
                 "--height-grid", str(tmp_path / "missing.txt")]) == EXIT_IO


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["no-such-command"])
    assert ex.value.code == 2
