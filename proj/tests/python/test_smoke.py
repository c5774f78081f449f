import json
import os
import subprocess
from pathlib import Path

import jsonschema
import pytest

import cuspcount

ROOT = Path(__file__).resolve().parents[2]
SCHEMA = json.loads(
    Path(os.environ.get("CUSPCOUNT_SCHEMA", ROOT / "schema" / "report.schema.json")).read_text()
)
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)

COMMANDS = [
    ["disc", "U(4)"],
    ["aut", "U(6)"],
    ["isogenus", "U(6)+U", "U(3)+U(2)"],
    ["isotropic", "U+diag(-2)", "--bound", "2"],
    ["genus", "--disc", "diag(-2,-6)"],
    ["fm", "count", "U(12)"],
    ["fm", "twisted", "--d", "2", "U(2)"],
    ["fm", "elliptic", "U+diag(-6)"],
    ["cusps", "--div", "2", "U(2)"],
    ["verify-ur", "--r", "3", "--max-r", "8"],
    ["transvect", "U+U", "--isotropic", "1,0,0,0"],
    ["classify-i1", "U+U(2)", "--bound", "1"],
]


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: " ".join(a))
def test_reports_validate_and_are_deterministic(args):
    code, out, err = cuspcount.run(args)
    assert code == 0, err
    doc = json.loads(out)
    VALIDATOR.validate(doc)
    assert doc["schema_version"] == cuspcount.SCHEMA_VERSION
    assert doc["command"] == args[0]
    assert cuspcount.run(args)[1] == out


def test_error_reports_validate():
    code, doc = cuspcount.report("disc", "U(0)")
    assert code == 2
    VALIDATOR.validate(doc)
    assert doc["error"]["kind"] == "BadParams"

    code, doc = cuspcount.report("--budget", "50", "aut", "U(100)")
    assert code == 3
    assert doc["error"]["kind"] == "BudgetExceeded"


def test_direct_functions():
    assert cuspcount.gram("U(6)+U") == [[0, 6, 0, 0], [6, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    assert cuspcount.invariant_factors("U(4)") == [4, 4]
    # |O(A_U(12))| = 2^tau(12) * phi(12) = 16
    assert cuspcount.aut_order("U(12)") == 16
    assert cuspcount.aut_order("U(12)", direct=True) == 16
    assert cuspcount.is_isogenus("U(6)+U", "U(2)+U(3)")
    assert not cuspcount.is_isogenus("U(2)", "diag(2,-2)")

    cusps = cuspcount.count_cusps("U(2)", 2)
    assert cusps == {"value": 2, "route": "orbit_on_A", "exact": True,
                     "window_note": cusps["window_note"]}
    assert cuspcount.count_fm("U+diag(-2)")["value"] == 1

    rep = cuspcount.ur_example(3)
    assert rep["passed"]
    assert (rep["fm"]["value"], rep["elliptic_cusps_distinct"], rep["fm_elliptic"]["value"],
            rep["mu1_fiber"]["value"], rep["standard_cusps"]) == (1, True, 2, 1, 2)


def test_errors_carry_kind():
    with pytest.raises(cuspcount.Error) as info:
        cuspcount.gram("U(6")
    kind, message = info.value.args
    assert kind == "ParseError"
    assert "offset 3" in message
    with pytest.raises(cuspcount.Error) as info:
        cuspcount.count_cusps("U(2)", 0)
    assert info.value.args[0] == "BadParams"


@pytest.mark.skipif("CUSPCOUNT_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_binary_matches_module():
    args = ["verify-ur", "--r", "3"]
    proc = subprocess.run([os.environ["CUSPCOUNT_CLI"], *args], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == cuspcount.run(args)[1]
