"""Tests for the command line front end: exit codes, formats, schema."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")

from locfree.cli import run

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "schemas" / "output.schema.json"


def invoke(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_hilbert_example(capsys):
    code, out, err = invoke(capsys, ["symbol", "hilbert", "-1", "-1", "--place", "2"])
    assert (code, out, err) == (0, "-1\n", "")
    # the documented separator form gives the same bytes
    code2, out2, _ = invoke(capsys, ["symbol", "hilbert", "--place", "2", "--", "-1", "-1"])
    assert (code2, out2) == (0, out)
    code3, out3, _ = invoke(capsys, ["symbol", "hilbert", "--place", "inf", "--", "-1", "-1/2"])
    assert (code3, out3) == (0, "-1\n")


def test_symbol_values(capsys):
    assert invoke(capsys, ["symbol", "legendre", "2", "7"])[:2] == (0, "1\n")
    assert invoke(capsys, ["symbol", "legendre", "3", "7"])[:2] == (0, "-1\n")
    assert invoke(capsys, ["symbol", "kronecker", "2", "15"])[:2] == (0, "1\n")


def test_classnumber_example(capsys):
    code, out, err = invoke(capsys, ["order", "classnumber", "11"])
    assert code == 0
    assert out.splitlines() == ["formula: 2", "enumeration: 2", "agree: true"]


def test_quadclass_text(capsys):
    code, out, _ = invoke(capsys, ["quadclass", "--", "-47"])
    assert code == 0
    assert out.splitlines()[0] == "h(-47) = 5"
    code, out, _ = invoke(capsys, ["quadclass", "--narrow", "12"])
    assert code == 0
    assert out.splitlines()[0] == "h+(12) = 2"


def test_cancel_range_json(capsys):
    code, out, _ = invoke(capsys, ["lfcg", "cancel", "--json", "--range", "2..50"])
    assert code == 0
    doc = json.loads(out)
    holding = {int(row["p"]) for row in doc["table"] if row["holds"]}
    assert holding == {2, 3, 5, 7, 13}
    assert all(row["cl"] == "1" for row in doc["table"])


def test_byte_determinism(capsys):
    a = invoke(capsys, ["lfcg", "cancel", "--json", "--range", "2..30"])
    b = invoke(capsys, ["lfcg", "cancel", "--json", "--range", "2..30"])
    assert a == b
    c = invoke(capsys, ["order", "classset", "11", "--json"])
    d = invoke(capsys, ["order", "classset", "11", "--json"])
    assert c == d


def test_domain_errors_exit_1(capsys):
    for argv in (
        ["quadclass", "--", "-21"],           # not a fundamental discriminant
        ["symbol", "legendre", "3", "4"],      # modulus is not an odd prime
        ["order", "disc", "10"],               # not prime
        ["lfcg", "stable", "--bpinf", "11", "--norm", "11"],  # ramified norm
        ["lfcg", "cancel", "--range", "9..2"],
        ["symbol", "hilbert", "1", "1", "--place", "x"],
        ["lfcg", "swan", "--spec", "/nonexistent/algebra.json"],
    ):
        code, out, err = invoke(capsys, argv)
        assert code == 1, argv
        assert err.startswith("error: ")
        assert out == ""


def test_usage_errors_exit_2(capsys):
    for argv in (
        ["nonsense"],
        ["lfcg", "cancel"],                    # missing --range
        ["lfcg", "cancel", "--range", "2..x"],
        ["symbol", "hilbert", "1", "1"],       # missing --place
        ["lfcg", "swan", "--bpinf", "2", "--spec", "f.json"],  # exclusive
        [],
    ):
        code, _, _ = invoke(capsys, argv)
        assert code == 2, argv


def test_no_ansi_escapes(capsys):
    for argv in (["order", "classset", "11"], ["quat", "ramified", "--", "-1", "-1"]):
        _, out, _ = invoke(capsys, argv)
        assert "\x1b" not in out


def test_json_outputs_validate_against_schema(capsys, tmp_path):
    spec_file = tmp_path / "algebra.json"
    spec_file.write_text(json.dumps({
        "factors": [
            {"kind": "matrix", "degree": 2, "center_disc": -20},
            {"kind": "ramified-quaternion", "finite": [2, 3], "real": []},
        ]
    }))
    validator = jsonschema.Draft202012Validator(json.loads(SCHEMA_PATH.read_text()))
    invocations = [
        ["symbol", "legendre", "--json", "2", "7"],
        ["symbol", "kronecker", "--json", "2", "15"],
        ["symbol", "hilbert", "--json", "--place", "2", "--", "-1", "-1"],
        ["quat", "ramified", "--json", "--", "-1", "-1"],
        ["quat", "bpinf", "--json", "13"],
        ["quat", "nrd", "--json", "--", "-1", "-1", "1/2", "1/2", "1/2", "1/2"],
        ["order", "disc", "--json", "7"],
        ["order", "classset", "--json", "11"],
        ["order", "classnumber", "--json", "11"],
        ["quadclass", "--json", "--", "-47"],
        ["quadclass", "--json", "--narrow", "12"],
        ["lfcg", "swan", "--json", "--bpinf", "11"],
        ["lfcg", "swan", "--json", "--spec", str(spec_file)],
        ["lfcg", "eichler", "--json", "--bpinf", "3"],
        ["lfcg", "eichler", "--json", "--spec", str(spec_file)],
        ["lfcg", "cancel", "--json", "--range", "2..20"],
        ["lfcg", "stable", "--json", "--bpinf", "2", "--norm", "3"],
        ["lfcg", "stable", "--json", "--bpinf", "11", "--norm", "1"],
    ]
    for argv in invocations:
        code, out, err = invoke(capsys, argv)
        assert code == 0, (argv, err)
        doc = json.loads(out)
        validator.validate(doc)


def test_module_entry_point_matches_run(capsys):
    code, out, _ = invoke(capsys, ["symbol", "legendre", "2", "7"])
    proc = subprocess.run(
        [sys.executable, "-m", "locfree.cli", "symbol", "legendre", "2", "7"],
        capture_output=True, text=True)
    assert proc.returncode == code == 0
    assert proc.stdout == out
