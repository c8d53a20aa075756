import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from weilforge.cli import main
from weilforge.config import ConfigError, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def cfg(name):
    return CONFIGS / f"{name}.yaml"


@pytest.mark.parametrize(
    "argv, code",
    [
        (("validate", cfg("tangent_sl2")), 0),
        (("check", cfg("tangent_sl2"), "--trials", 3), 0),
        (("check", cfg("matched_sl2"), "--trials", 3), 0),
        (("check", cfg("matched_sl2_mutant"), "--trials", 3), 3),
        (("validate", cfg("bad_bracket")), 2),
        (("check", cfg("bad_bracket")), 2),
        (("cohomology", cfg("matched_sl2_mutant")), 3),
        (("cohomology", cfg("abelian_vacant"), "-d", "total"), 0),
        (("validate", CONFIGS / "missing.yaml"), 1),
        (("check", "--bogus", cfg("tangent_sl2")), 1),
        (("basis", "17,0,0"), 1),
        (("basis", "1,x,1"), 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_yaml_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("preset:\n  kind: tangent_lie_algebra\n  params: [1, 2\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and f"{bad}:" in err


@pytest.mark.parametrize(
    "raw, where",
    [
        ({"preset": {"kind": "nope"}}, "preset.kind"),
        ({"shape": {"nA": 1, "nB": 1, "nE": 0}, "dataH": {"pairing": [["x"]]}}, "dataH.pairing[0][0]"),
        ({"shape": {"nA": -1, "nB": 0, "nE": 0}}, "shape.nA"),
        ({"preset": {"kind": "tangent_lie_algebra"}, "shape": {}}, "config"),
        ({"preset": {"kind": "matched_pair", "params": {"ambient": "sl2", "first": [0, 1], "second": [2],
                                                        "mutations": [{"action": "x", "index": [0, 0, 0]}]}}},
         "preset.params.mutations[0].action"),
    ],
)
def test_config_errors_carry_location(raw, where):
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    assert info.value.where == where


def test_rationals_are_exact():
    p = parse_config({"preset": {"kind": "vacant_pairing", "params": {"nA": 1, "nB": 1, "P": [["1/3"]]}}})
    assert str(p.single.pairing[0][0]) == "1/3"


def test_json_report_schema(capsys):
    code, out, _ = run(capsys, "cohomology", cfg("tangent_sl2"), "--differential", "h", "--max-degree", "3",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == 1 and rep["shape"] == [3, 0, 3] and rep["differential"] == "h"
    assert rep["truncation"] == {"max_p": 3, "max_q": 3}
    row = [e["betti"] for e in rep["table"] if e["q"] == 0]
    assert row == [1, 0, 0, 1]


def test_check_json_has_verdicts(capsys):
    _, out, _ = run(capsys, "check", cfg("matched_sl2_mutant"), "--trials", "2", "--format", "json")
    rep = json.loads(out)
    assert rep["status"] == "incompatible"
    assert set(rep["double"]["verdicts"].values()) == {"nonzero"}


def test_total_cohomology_text(capsys):
    code, out, _ = run(capsys, "cohomology", cfg("abelian_vacant"), "-d", "total", "--max-degree", "2",
                       "--format", "json")
    assert code == 0
    assert [e["betti"] for e in json.loads(out)["table"]] == [1, 2, 1]


def test_basis_grid(capsys):
    code, out, _ = run(capsys, "basis", "1,1,1", "--max", "2", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["dims"] == [[1, 1, 0], [1, 2, 1], [0, 1, 2]]


def test_reports_are_byte_identical(capsys):
    argv = ("check", cfg("matched_sl2"), "--trials", "4", "--seed", "7", "--format", "json")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_thread_cap_does_not_change_output():
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, WEIL_FORGE_THREADS=threads)
        res = subprocess.run([sys.executable, "-m", "weilforge.cli", "cohomology", str(cfg("matched_sl2")),
                              "--max-degree", "3", "--format", "json"], capture_output=True, env=env, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1]
