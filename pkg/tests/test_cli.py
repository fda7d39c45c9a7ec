import json
import math
import os

import pytest

from billiard_zeta.cli import run
from billiard_zeta.serialize import SCHEMAS, csv_text, fmt, read_csv

SCENES = os.path.join(os.path.dirname(__file__), os.pardir, "scenes")
TWO = os.path.join(SCENES, "two_disks.json")
THREE = os.path.join(SCENES, "three_disks.json")
DELTA = -0.5 * math.log(49 + 20 * math.sqrt(6))


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_scene_check(capsys):
    code, out, _ = _run(capsys, "scene-check", TWO)
    assert code == 0
    assert "kappa0=2" in out and "H=true" in out


def test_s0_csv(capsys):
    code, out, _ = _run(capsys, "s0", "--scene", THREE, "--memory", "4", "--tol", "1e-8")
    assert code == 0
    header, rows = read_csv(out)
    assert header == SCHEMAS["s0"][1] and len(rows) == 1
    assert -0.2 < float(rows[0][0]) < -0.05 and rows[0][1] == "4"
    assert out.endswith("\r\n")


def test_zeta_zeros(capsys):
    code, out, _ = _run(capsys, "zeta-zeros", "--scene", TWO, "--window", "-0.4,0,-3,3")
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 7
    want = [(DELTA + 2j * math.pi * k) / 8 for k in range(-3, 4)]
    for r in rows:
        z = complex(float(r[0]), float(r[1]))
        assert min(abs(z - w) for w in want) < 1e-8


def test_determinism(capsys, tmp_path):
    args = ["orbits", "--scene", THREE, "--max-len", "4"]
    a = _run(capsys, *args)[1]
    b = _run(capsys, *args)[1]
    assert a == b and a
    out = tmp_path / "o"
    out.mkdir()
    assert run(args + ["--out", str(out)]) == 0
    with open(out / "orbits.csv", newline="") as fh:
        assert fh.read() == a


def test_exit_codes(capsys, tmp_path):
    assert _run(capsys, "orbits", "--scene", TWO, "--bogus")[0] == 64
    assert _run(capsys, "frobnicate")[0] == 64
    assert _run(capsys, "s0", "--scene", str(tmp_path / "missing.json"))[0] == 2
    assert _run(capsys, "s0", "--scene", TWO, "--tol", "0")[0] == 2
    empty = tmp_path / "empty.json"
    empty.write_text('{"obstacles": []}')
    assert _run(capsys, "report", str(empty))[0] == 2
    bad = tmp_path / "col.json"
    bad.write_text(json.dumps({"obstacles": [{"center": [4 * i, 0], "radius": 1}
                                             for i in range(3)]}))
    code, out, _ = _run(capsys, "report", str(bad))
    assert code == 2
    rep = json.loads(out)
    assert rep["no_eclipse"] is False and rep["eclipse"]
    assert _run(capsys, "scene-check", str(bad))[0] == 2


def test_report_two_disk(capsys):
    code, out, _ = _run(capsys, "report", TWO, "--memory", "4", "--thm3-n", "3")
    assert code == 0
    rep = json.loads(out)
    s0 = rep["s0"]["value"] if isinstance(rep["s0"], dict) else rep["s0"]
    za = rep["zeta_abscissa"]
    dt = rep["delta_over_T"]
    for a, b in ((s0, za), (s0, dt), (za, dt)):
        assert abs(a - b) <= 1e-6


@pytest.mark.parametrize("argv", [
    ["trace", "--obstacle", "1", "--angle", "0", "--direction", "0", "--steps", "3"],
    ["segment", "--word", "1,2,3"],
    ["words", "--max-len", "3", "--cycles"],
    ["pressure", "--tau", "-0.1,0,0.1", "--memory", "3"],
    ["sandwich", "--memory", "3"],
    ["zeta-eval", "--re", "0.2", "--im", "1"],
    ["front", "--word", "1,2,3,1,2"],
    ["wkb-series", "--N", "2", "--s-re", "-0.05"],
    ["thm3", "--n-min", "1", "--n-max", "2", "--s-re", "-0.12", "--memory", "3"],
])
def test_commands_smoke(capsys, argv):
    code, out, err = _run(capsys, *(argv + ["--scene", THREE]))
    assert code == 0, err
    assert out


def test_svg_outputs(capsys, tmp_path):
    svg = tmp_path / "z.svg"
    assert run(["zeta-plot", "--scene", TWO, "--window", "-0.4,0,-3,3", "--out", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<circle") == 7


def test_csv_format():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(float("nan")) == "nan" and fmt(True) == "true" and fmt(3) == "3"
    text = csv_text("s0", [(0.5, 4, 1e-9)])
    assert text.split("\r\n")[0] == "s0,memory,residual"
    with pytest.raises(ValueError):
        csv_text("s0", [(1, 2)])
