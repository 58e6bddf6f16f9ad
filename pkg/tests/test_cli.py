import io
import json
import math
import subprocess
import sys

import pytest

from evomonad.cli import SimConfig, main, sample_times


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def rows(csv_text):
    lines = csv_text.strip().splitlines()
    return lines[0].split(","), [[float(v) for v in line.split(",")] for line in lines[1:]]


def test_sample_times_include_the_endpoint():
    assert sample_times(1.0, SimConfig(step=0.3)) == pytest.approx([0, 0.3, 0.6, 0.9, 1.0])
    assert sample_times(math.inf, SimConfig(step=5, horizon=10)) == [0, 5, 10]
    assert sample_times(0.0, SimConfig()) == [0.0]
    with pytest.raises(ValueError):
        SimConfig(step=0)
    with pytest.raises(ValueError):
        SimConfig(horizon=math.inf)


def test_simulate_thermostat_pipeline():
    code, out, _ = run("simulate", "maintainer . thermostat", "--input", "10", "--step", "0.5", "--horizon", "30")
    assert code == 0
    header, data = rows(out)
    assert header == ["t", "y"]
    for t, y in data:
        expected = 10 + t if t <= 10 else 20 + math.sin(t - 10)
        assert y == pytest.approx(expected, abs=1e-6)
    assert data[-1][0] == 30.0


def test_simulate_water_from_file(tmp_path):
    spec = tmp_path / "w.evo"
    spec.write_text("-- three pump cycles\niterate(water, 3)\n")
    code, out, _ = run("simulate", str(spec), "--input", "(0,0)", "--step", "10")
    assert code == 0
    header, data = rows(out)
    assert header == ["t", "y_0", "y_1_0", "y_1_1"]
    assert [tuple(r[2:]) for r in data] == [(0, 0), (10, 0), (10, 10), (20, 10)]


def test_with_duration_column_spells_inf():
    code, out, _ = run("simulate", "maintainer", "--input", "0", "--step", "50", "--with-duration", "--precision", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,y,duration"
    assert lines[1] == "0.00,0.00,inf"


def test_ball_rows_end_on_the_duration():
    code, out, _ = run("simulate", "iterate(ball, 3)", "--input", "(0, 5)", "--step", "0.25")
    _, data = rows(out)
    assert code == 0 and data[-1][0] == pytest.approx(2.525381, abs=1e-6)


def test_runtime_error_exit_code():
    code, out, err = run("simulate", "pair<<thermostat, maintainer>>", "--input", "10")
    assert code == 3 and out == ""
    assert "CompatibilityError" in err and "10.0" in err and "inf" in err
    code, _, err = run("simulate", "feedback(ball)", "--input", "(0,5)")
    assert code == 3 and "pre-dynamical" in err


def test_spec_errors_exit_two_with_span():
    code, _, err = run("simulate", "maintainer . ", "--input", "1")
    assert code == 2 and "<inline>:1:14: error" in err and "^" in err
    code, _, err = run("simulate", "lift(add) . thermostat", "--input", "1")
    assert code == 2 and "1:1" in err and "1:13" in err
    code, _, err = run("simulate", "thermostat", "--input", "(1,2)")
    assert code == 2 and "does not fit" in err
    code, _, err = run("simulate", "thermostat", "--input", "1", "--step", "-1")
    assert code == 2


def test_check_filters_and_json():
    code, out, _ = run("check", "--only", "monad")
    assert code == 0 and out.count("PASS") == 3
    code, out, _ = run("check", "--only", "em,kleisli", "--json")
    assert code == 0 and len(json.loads(out)) == 5
    code, _, err = run("check", "--only", "bogus")
    assert code == 2 and "bogus" in err


def test_check_with_zero_tolerance_warns():
    code, _, err = run("check", "--only", "monad", "--tol", "0")
    assert "warning" in err and code in (0, 1)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("EVOMONAD_SEED", "42")
    _, a, _ = run("check", "--only", "commutativity", "--json")
    _, b, _ = run("check", "--only", "commutativity", "--json", "--seed", "42")
    _, c, _ = run("check", "--only", "commutativity", "--json", "--seed", "3")
    assert a == b and a != c


def test_list_and_parse():
    code, out, _ = run("list")
    assert code == 0
    for needle in ("thermostat", "ball_moon g=1.622", "delay"):
        assert needle in out
    code, out, _ = run("parse", "c = thermostat;maintainer.c")
    assert code == 0 and out.startswith("c = thermostat;\nmaintainer . c\n")
    assert run("parse", "pair<<a")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "evomonad", "simulate", "thermostat", "--input", "19", "--step", "0.5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["t,y", "0.000000,19.000000", "0.500000,19.500000", "1.000000,20.000000"]
