import subprocess
import sys
from fractions import Fraction

import pytest

from monodyn._fmt import parse_rational
from monodyn.cli import main

FAST_TARGETS = [
    "cycles3",
    "cycles4",
    "stability-plane-model2",
    "four-cycle-model1",
    "stability-plane-model1",
    "bif2d-model1",
    "bif1d-model1",
    "three-cycles-model2",
    "magnitude-three-cycles",
    "four-cycles-model2",
    "five-cycles-model2",
    "bif1d-model2-K",
    "bif1d-model2-a",
    "basins",
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text, value", [("0.05", Fraction(1, 20)), ("3/5", Fraction(3, 5)), ("2", Fraction(2)),
                                         ("-1.25", Fraction(-5, 4))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_cycles(capsys):
    code, out, _ = run(capsys, "cycles", "--model", "2", "--K", "3.303", "--n", "3")
    assert code == 0
    assert "8 orbits of order 3, 2 stable" in out
    assert out.count("magnitude in") == 8


def test_decimal_parameters_are_exact(capsys):
    code, out, _ = run(capsys, "cycles", "--K", "2", "--d", "0.05", "--n", "2")
    assert code == 0 and "3 orbits of order 2, 2 stable" in out


def test_stability(capsys):
    code, out, _ = run(capsys, "stability", "--model", "2", "--K", "1/2", "--a", "7/2")
    assert code == 0
    assert "stable positive equilibria: 2" in out and "signs:" in out
    code, out, _ = run(capsys, "stability", "--model", "1", "--e", "1", "--f", "1/2")
    assert code == 0 and "stable positive equilibria: 1" in out


def test_thresholds(capsys):
    code, out, _ = run(capsys, "thresholds", "--n", "2", "--range", "1:3", "--tol", "1/1000000")
    assert code == 0 and out.count("bracket") == 2


def test_chaos_exit_codes(capsys):
    code, out, _ = run(capsys, "chaos", "--model", "1", "--e", "1", "--f", "1")
    assert code == 0 and "method=snapback" in out
    code, out, _ = run(capsys, "chaos", "--model", "1", "--e", "1", "--f", "2")
    assert code == 1 and "snapback: no witness" in out
    code, out, _ = run(capsys, "chaos", "--K", "2.42")
    assert code == 0 and "method=period3" in out


def test_bif1d_writes_csv(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "bif1d", "--model", "1", "--e", "1", "--vary", "f", "--range", "0.6:1.6",
                       "--res", "51", "--x0", "1.1", "--out", str(path))
    assert code == 0 and "period 2 onsets" in out
    lines = path.read_text().splitlines()
    assert lines[0] == "param,sample_index,x,period" and len(lines) == 1 + 51 * 256


def test_bif2d_writes_ppm(capsys, tmp_path):
    path = tmp_path / "g.ppm"
    code, _, _ = run(capsys, "bif2d", "--model", "1", "--vary", "e", "--vary", "f", "--range", "0.6:1.6",
                     "--range", "0.6:1.6", "--res", "8", "--x0", "0.5", "--out", str(path))
    assert code == 0 and path.read_bytes().startswith(b"P6\n8 8\n255\n")


def test_basins_uses_output_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MONODYN_OUT", str(tmp_path))
    code, out, _ = run(capsys, "basins", "--K", "1/2", "--a", "7/2", "--res", "500")
    assert code == 0 and "E1 = 1.189962" in out
    assert (tmp_path / "basins.csv").exists() and (tmp_path / "basins.json").exists()


@pytest.mark.parametrize("argv", [
    ["cycles", "--model", "1", "--K", "2", "--n", "2"],
    ["cycles", "--K", "3", "--n", "9"],
    ["cycles", "--model", "1", "--e", "1", "--n", "2"],
    ["thresholds", "--n", "2"],
    ["bif1d", "--model", "1", "--e", "1"],
    ["basins", "--K", "3"],
])
def test_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error:" in err


def test_bad_rational_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cycles", "--K", "two", "--n", "2"])
    assert exc.value.code == 2


def test_reproduce_list(capsys):
    code, out, _ = run(capsys, "reproduce", "--list")
    assert code == 0 and "cycles3 (alias table3)" in out


@pytest.mark.parametrize("target", FAST_TARGETS)
def test_reproduce_matches_golden(capsys, target):
    code, out, _ = run(capsys, "reproduce", target)
    assert code == 0, out
    assert "records match" in out


def test_reproduce_alias(capsys):
    code, out, _ = run(capsys, "reproduce", "table3")
    assert code == 0


def test_reproduce_mismatch_exit_1(capsys):
    # The printed Table 1 carries a sign misprint in one row, so this target
    # reports it rather than passing.
    code, out, _ = run(capsys, "reproduce", "table1")
    assert code == 1 and "MISMATCH at record '1,1,3/8,1/16,1'" in out


def test_reproduce_unknown_target(capsys):
    code, _, err = run(capsys, "reproduce", "figure99")
    assert code == 2


def test_reproduce_is_deterministic(capsys, tmp_path):
    outs = []
    for sub in ("one", "two"):
        d = tmp_path / sub
        code, _, _ = run(capsys, "reproduce", "bif1d-model1", "--out", str(d))
        assert code == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outs[0] and outs[0] == outs[1]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "monodyn.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "0.1.0"
