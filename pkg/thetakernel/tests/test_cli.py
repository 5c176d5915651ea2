"""
Tests for the command-line surface.
"""
import json
from pathlib import Path

import jsonschema
import pytest

from thetakernel.core.config import settings
from thetakernel.main import run


SCHEMAS = Path(__file__).resolve().parents[2] / "docs" / "schemas"


def test_sumtable_at_one(capsys):
    """Test the sum at t = 1 prints as an exact zero."""
    assert run(["coeffs", "sumtable", "--t", "1"]) == 0
    assert capsys.readouterr().out == "0.000000000000\n"


def test_sumtable_range(capsys):
    """Test a t-range prints one "t & value" row per step."""
    assert run(["coeffs", "sumtable", "--t-min", "1", "--t-max", "2", "--t-step", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1 & 0.000000000000"
    assert [line.split(" & ")[0] for line in lines] == ["1", "1.5", "2"]


def test_sumtable_needs_grid():
    """Test sumtable without --t or a full range is a usage error."""
    assert run(["coeffs", "sumtable", "--t-min", "1"]) == 2


def test_zero_count_text(capsys):
    """Test zeros count prints the dimension for ν = 2π."""
    argv = ["zeros", "count", "--lattice", "1,0,0,1", "--nu", "2pi", "--chi", "weierstrass", "--w", "0.3,0.2"]
    assert run(argv) == 0
    assert capsys.readouterr().out == "2\n"


def test_kernel_eval_json(capsys):
    """Test kernel eval emits the SumResult report."""
    assert run(["kernel", "eval", "--nu", "2pi", "--z", "0.2,0.1", "--w", "-0.1,0.3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"value", "tail_bound", "shells_used"}
    assert len(report["value"]) == 2


def test_deterministic_output(capsys):
    """Test repeated runs print identical bytes."""
    argv = ["coeffs", "one", "--nu", "2pi", "--m", "2", "--n", "1", "--p", "1"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_csv_columns(capsys):
    """Test CSV output splits complex values into re/im columns."""
    assert run(["coeffs", "one", "--nu", "2pi", "--m", "1", "--n", "1", "--format", "csv"]) == 0
    header = capsys.readouterr().out.splitlines()[0].split(",")
    assert {"value_re", "value_im", "abs_value", "mass"} <= set(header)


def test_output_file(tmp_path, capsys):
    """Test --output writes the report to a file instead of stdout."""
    target = tmp_path / "reports" / "mu.json"
    assert run(["elliptic", "mu", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(target.read_text())
    assert set(report) == {"mu", "eta1", "eta2", "legendre"}


def test_domain_error(capsys):
    """Test a non-integral dimension exits 1 with a JSON error on stderr."""
    assert run(["kernel", "eval", "--nu", "1", "--z", "0", "--w", "0"]) == 1
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "NonIntegralDimension"
    assert "detail" in error


def test_identically_zero_error(capsys):
    """Test w on the lattice in the one-dimensional square case."""
    assert run(["zeros", "count", "--w", "0,0"]) == 1
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "IdenticallyZero"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["kernel"],
        ["kernel", "eval", "--z", "0"],
        ["kernel", "eval", "--lattice", "1,2,3", "--z", "0", "--w", "0"],
        ["kernel", "eval", "--chi", "bogus", "--z", "0", "--w", "0"],
        ["verify", "all", "--only", "nonexistent"],
        ["coeffs", "table", "--degree", "40"],
        ["coeffs", "one", "--m", "-1", "--n", "2"],
        ["coeffs", "scaling", "--lambda", "0", "--m", "1"],
        ["coeffs", "table", "--degree", "16"],
        ["coeffs", "recur", "--degree", "15"],
        ["coeffs", "sumtable", "--t", "-1"],
        ["coeffs", "sumtable", "--t", "0"],
        ["kernel", "eval", "--eps", "-1", "--z", "0", "--w", "0"],
        ["kernel", "eval", "--eps", "0", "--z", "0", "--w", "0"],
    ],
)
def test_usage_errors(argv):
    """Test malformed command lines exit 2."""
    assert run(argv) == 2


def test_version(capsys):
    """Test --version prints the application name and version."""
    assert run(["--version"]) == 0
    assert settings.app_version in capsys.readouterr().out


def test_verify_subset(capsys):
    """Test verify all with a subset of checks."""
    assert run(["verify", "all", "--only", "perelomov,sumtable,theta-identity"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3
    assert out.rstrip().endswith("all passed")


def test_zero_count_json(capsys):
    """Test the JSON form of zeros count carries the dimension."""
    assert run(["zeros", "count", "--nu", "3pi", "--w", "0.1,0.25", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["count"] == report["dimension"] == 3


def test_verify_all(capsys):
    """Test every acceptance check passes."""
    assert run(["verify", "all"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.rstrip().endswith("all passed")


@pytest.mark.parametrize(
    "schema, argv",
    [
        ("kernel_eval", ["kernel", "eval", "--nu", "2pi", "--z", "0.2,0.1", "--w", "-0.1,0.3"]),
        ("kernel_eval", ["kernel", "poincare", "--nu", "2pi", "--m", "2", "--z", "0.2,0.1"]),
        ("complex", ["kernel", "series", "--nu", "2pi", "--z", "0.2,0.1", "--w", "-0.1,0.3"]),
        ("residual", ["kernel", "reproduce", "--nu", "2pi", "--quad-n", "16", "--z", "0.25,0.25"]),
        ("coeff", ["coeffs", "one", "--nu", "2pi", "--m", "2", "--n", "1", "--p", "1"]),
        ("coeff_table", ["coeffs", "table", "--nu", "2pi", "--degree", "2"]),
        ("parity", ["coeffs", "parity", "--nu", "2pi", "--degree", "3"]),
        ("recurrence", ["coeffs", "recur", "--nu", "2pi", "--degree", "2"]),
        ("residual", ["coeffs", "scaling", "--nu", "2pi", "--lambda", "0,2", "--m", "1"]),
        ("sumtable", ["coeffs", "sumtable", "--t-min", "1", "--t-max", "2", "--t-step", "0.5", "--format", "json"]),
        ("zero_count", ["zeros", "count", "--nu", "2pi", "--w", "0.3,0.2", "--format", "json"]),
        ("zero_locate", ["zeros", "locate", "--nu", "2pi", "--w", "0.3,0.2"]),
        ("xi", ["zeros", "xi", "--wgrid", "4", "--zgrid", "6"]),
        ("mu", ["elliptic", "mu"]),
        ("complex", ["elliptic", "sigma", "--z", "0.3,0.2", "--modified"]),
        ("theta_identity", ["elliptic", "theta-identity"]),
        ("verify", ["verify", "all", "--only", "perelomov,sumtable", "--format", "json"]),
    ],
)
def test_json_matches_schema(capsys, schema, argv):
    """Test JSON reports validate against the published schemas."""
    assert run(argv) == 0
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(instance=report, schema=json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))


def test_error_matches_schema(capsys):
    """Test the stderr error line validates against its schema."""
    assert run(["kernel", "eval", "--nu", "1", "--z", "0", "--w", "0"]) == 1
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    jsonschema.validate(instance=error, schema=json.loads((SCHEMAS / "error.schema.json").read_text()))
