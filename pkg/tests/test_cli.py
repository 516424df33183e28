import json
import math

import pytest

from potts1d import ModelParams, ThermoState, thermo_point
from potts1d.cli import main, parse_run_config, run, table_to_csv, table_to_json
from potts1d.sweep import GridSpec, sweep_1d, sweep_2d


def _parse_point_output(text):
    values = {}
    for line in text.strip().splitlines():
        name, _, value = line.partition(" = ")
        values[name.strip()] = float(value)
    return values


def test_point_command(capsys):
    rc = main(["point", "--q", "3", "--J", "1", "--h", "0.5", "--beta", "0.7"])
    assert rc == 0
    values = _parse_point_output(capsys.readouterr().out)
    expected = thermo_point(ModelParams(3, 1.0, 0.5), ThermoState(0.7))
    assert values["f"] == expected.f
    assert values["S"] == expected.S
    assert values["m"] == expected.m
    assert values["chi"] == expected.chi
    assert values["C"] == expected.C
    # frozen reference values, each backed by its finite-difference oracle
    assert values["f"] == pytest.approx(-2.7678678932972907, rel=1e-13)
    assert values["S"] == pytest.approx(1.2982546645409947, rel=1e-13)
    assert values["m"] == pytest.approx(1.3045976750349157, rel=1e-13)
    assert values["chi"] == pytest.approx(0.23718886297687336, rel=1e-13)
    assert values["C"] == pytest.approx(0.08135578000106754, rel=1e-13)


def test_point_accepts_temperature_flag(capsys):
    rc = main(["point", "--q", "3", "--J", "1", "--h", "0.5", "--T", str(1.0 / 0.7)])
    assert rc == 0
    values = _parse_point_output(capsys.readouterr().out)
    assert values["f"] == pytest.approx(-2.7678678932972907, rel=1e-12)


def test_point_domain_error_exit_code(capsys):
    rc = main(["point", "--q", "1", "--J", "1", "--h", "0", "--beta", "1"])
    assert rc == 1
    assert "q must be at least 2" in capsys.readouterr().err


def test_usage_errors_exit_two(capsys):
    assert main(["point", "--q", "3", "--J", "1", "--h", "0"]) == 2
    assert main(["point", "--q", "3", "--J", "1", "--h", "0", "--beta", "1", "--T", "2"]) == 2
    assert main(["sweep", "--q", "3", "--J", "1", "--h", "0", "--beta", "1"]) == 2
    assert main(["nonsense"]) == 2
    capsys.readouterr()


def test_point_missing_param_is_usage_error(capsys):
    assert main(["point", "--J", "1", "--h", "0", "--beta", "1"]) == 2
    capsys.readouterr()


def test_sweep_csv_output(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(
        ["sweep", "--q", "3", "--J", "0", "--h", "0", "--axis", "beta",
         "--min", "0.5", "--max", "1.0", "--steps", "3", "--out", str(out)]
    )
    assert rc == 0
    text = out.read_text()
    lines = text.split("\n")
    assert lines[0] == "beta,beta,T,h,J,q,f,S,m,chi,C"
    assert text.endswith("\n") and "\r" not in text
    assert len(lines) == 5  # header + 3 rows + trailing newline
    first = lines[1].split(",")
    assert float(first[0]) == 0.5
    # 17 significant digits in scientific notation
    assert first[0] == "5.0000000000000000e-01"
    assert float(first[7]) == pytest.approx(math.log(3.0), rel=1e-15)


def test_sweep_json_and_csv_round_trip_identically(tmp_path):
    table = sweep_1d(ModelParams(5, -1.3, 0.7), ThermoState(1.7), GridSpec("h", -2.0, 2.0, 11))
    csv_text = table_to_csv(table)
    json_text = table_to_json(table)
    payload = json.loads(json_text)
    csv_rows = [line.split(",") for line in csv_text.strip().split("\n")[1:]]
    assert payload["metadata"]["columns"] == csv_text.split("\n")[0].split(",")
    assert len(csv_rows) == len(payload["rows"])
    for csv_row, json_row in zip(csv_rows, payload["rows"]):
        for cell, value in zip(csv_row, json_row):
            assert float(cell) == float(value)


def test_surface_command_row_major(tmp_path):
    out = tmp_path / "surface.csv"
    rc = main(
        ["surface", "--q", "16", "--J", "-12", "--h", "0",
         "--axis", "beta", "--min", "1.0", "--max", "2.0", "--steps", "2",
         "--axis2", "--min2", "-1.0", "--max2", "1.0", "--steps2", "2",
         "--out", str(out)]
    )
    # --axis2 value missing: argparse treats the next flag as its value
    assert rc == 2

    rc = main(
        ["surface", "--q", "16", "--J", "-12", "--h", "0",
         "--axis", "beta", "--min", "1.0", "--max", "2.0", "--steps", "2",
         "--axis2", "h", "--min2", "-1.0", "--max2", "1.0", "--steps2", "2",
         "--out", str(out)]
    )
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "beta,h,beta,T,h,J,q,f,S,m,chi,C"
    coords = [(float(r.split(",")[0]), float(r.split(",")[1])) for r in lines[1:]]
    assert coords == [(1.0, -1.0), (1.0, 1.0), (2.0, -1.0), (2.0, 1.0)]


def test_surface_matches_library_route(tmp_path):
    table = sweep_2d(
        ModelParams(4, 0.9, 0.0),
        None,
        GridSpec("beta", 0.5, 1.5, 3),
        GridSpec("h", -1.0, 1.0, 3),
    )
    text = table_to_csv(table)
    rows = [r.split(",") for r in text.strip().split("\n")[1:]]
    assert len(rows) == 9
    for row, table_row in zip(rows, table.rows):
        assert float(row[-5]) == pytest.approx(table_row.point.f, rel=1e-15)


def test_verify_command_pass_and_fail(capsys):
    rc = main(["verify", "--q", "3", "--J", "1", "--h", "0.5", "--beta", "0.7", "--n", "6"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "verify: PASS" in out
    line = next(l for l in out.splitlines() if "max relative discrepancy" in l)
    assert float(line.split("=")[1]) < 1e-10

    # an impossible tolerance flips the exit status
    rc = main(
        ["verify", "--q", "3", "--J", "1", "--h", "0.5", "--beta", "0.7",
         "--n", "6", "--tolerance", "0"]
    )
    out = capsys.readouterr().out
    assert rc == 1
    assert "verify: FAIL" in out


def test_verify_is_deterministic(capsys):
    args = ["verify", "--q", "4", "--J", "-2", "--h", "1", "--beta", "0.9", "--n", "5"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_peaks_command(capsys):
    rc = main(
        ["peaks", "--q", "22", "--J", "-3", "--beta", "0.9", "--observable", "chi",
         "--axis", "h", "--min", "-3", "--max", "3", "--steps", "10001"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("peak[chi] h = ")
    coord = float(out.split("=")[1].split("value")[0])
    value = float(out.rsplit("=", 1)[1])
    assert abs(coord - 1.1777387811382887) <= 6.0 / 10000
    assert value == pytest.approx(1.0 / 0.9, rel=1e-6)


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 3, "J": 1.0, "h": 0.5, "beta": 0.7}))
    rc = main(["point", "--config", str(cfg)])
    assert rc == 0
    base = _parse_point_output(capsys.readouterr().out)
    assert base["f"] == pytest.approx(-2.7678678932972907, rel=1e-13)

    # explicit flags take precedence over file values
    rc = main(["point", "--config", str(cfg), "--h", "0.0"])
    assert rc == 0
    override = _parse_point_output(capsys.readouterr().out)
    expected = thermo_point(ModelParams(3, 1.0, 0.0), ThermoState(0.7))
    assert override["f"] == expected.f

    # --T overrides the file's beta rather than colliding with it
    rc = main(["point", "--config", str(cfg), "--T", "2.0"])
    assert rc == 0
    cooled = _parse_point_output(capsys.readouterr().out)
    expected = thermo_point(ModelParams(3, 1.0, 0.5), ThermoState(0.5))
    assert cooled["f"] == expected.f


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert main(["point", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"quux": 1}))
    assert main(["point", "--config", str(bad)]) == 2
    assert main(["point", "--config", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_sweep_stdout_default(capsys):
    rc = main(
        ["sweep", "--q", "2", "--J", "1", "--h", "0", "--axis", "T",
         "--min", "0.5", "--max", "1.5", "--steps", "3", "--format", "json"]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["metadata"]["columns"][0] == "T"
    assert len(payload["rows"]) == 3
    # the swept temperature fills both the coordinate and the state columns
    for row in payload["rows"]:
        assert row[0] == pytest.approx(row[2], rel=1e-15)


def test_extreme_point_finite_through_cli(capsys):
    rc = main(["point", "--q", "3", "--J", "12", "--h", "3", "--beta", "30"])
    assert rc == 0
    values = _parse_point_output(capsys.readouterr().out)
    for v in values.values():
        assert math.isfinite(v)
    assert values["chi"] > 0.0
    assert values["C"] == values["chi"] * 12.0**2 * 30.0**3


def test_run_config_parsing_defaults():
    config = parse_run_config(
        ["verify", "--q", "3", "--J", "1", "--h", "0.5", "--beta", "0.7"]
    )
    assert config.n == 6
    assert config.tolerance == 1e-10
    config = parse_run_config(
        ["sweep", "--q", "3", "--J", "1", "--h", "0.5", "--beta", "0.7",
         "--axis", "h", "--min", "-1", "--max", "1", "--steps", "3"]
    )
    assert config.format == "csv"
    assert config.grids[0].axis == "h"
