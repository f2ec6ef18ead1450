import csv
import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from wva_probe.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main, parse_range
from wva_probe.postselect import optimal_delta
from wva_probe.spectral import SpectralParams

SMALL = {
    "fig1c": ["--delta-range=-1,-0.3,-0.05,0.05,0.3,1", "--grid-points", "41"],
    "fig2": ["--delta-range", "0.01:1:30:log", "--delta-e-range", "0,0.05,0.1,0.2"],
    "fig3": ["--rate-range", "1e-4:1:9:log", "--delta-range", "0.01:1:9:log"],
    "fig4": [
        "--delta-range", "0.01:1:6:log",
        "--gamma-noise-range", "0,0.05,0.1",
        "--delta-e-list", "0.05,0.1",
        "--ratio-range", "0,1,2",
    ],
    "shift": ["--gamma-noise", "0.1"],
    "snr": ["--method", "monte_carlo", "--trials", "100", "--total-time", "2000", "--tau-c", "20"],
    "sweep": ["--delta-range=-0.5,0,0.5", "--delta-e-range", "0,0.1"],
}


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def run(cmd, out, *extra):
    return main([cmd, "--out", str(out), *SMALL[cmd], *extra])


@pytest.mark.parametrize("cmd", sorted(SMALL))
def test_command_runs_and_is_byte_identical(cmd, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(cmd, a) == 0
    assert run(cmd, b) == 0
    meta = json.loads((a / "meta.json").read_text())
    assert meta["command"] == cmd and meta["outputs"]
    for key in ("version", "rng_algorithm", "duration_s", "defaults_version", "seed"):
        assert key in meta
    for name in meta["outputs"]:
        raw = (a / name).read_bytes()
        assert raw == (b / name).read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")


@pytest.mark.parametrize("cmd", ["fig2", "snr"])
def test_replay_from_metadata(cmd, tmp_path):
    a = tmp_path / "a"
    assert run(cmd, a) == 0
    replay = tmp_path / "replay"
    assert main([cmd, "--config", str(a / "meta.json"), "--out", str(replay)]) == 0
    meta = json.loads((a / "meta.json").read_text())
    for name in meta["outputs"]:
        assert (a / name).read_bytes() == (replay / name).read_bytes()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"delta": 0.2, "delta_e": 0.3, "unknown_key": 1}))
    assert main(["shift", "--config", str(cfg), "--delta", "0.4", "--out", str(tmp_path / "o")]) == 0
    meta = json.loads((tmp_path / "o" / "meta.json").read_text())
    assert meta["delta"] == 0.4 and meta["delta_e"] == 0.3
    assert "unknown_key" not in meta


def test_fig1c_contents(tmp_path):
    assert run("fig1c", tmp_path) == 0
    head, rows = read_csv(tmp_path / "fig1c_shifts.csv")
    assert head == ["delta", "exact_shift", "firstorder_shift", "probability", "flagged"]
    shift = {float(r[0]): float(r[1]) for r in rows}
    assert shift[1.0] == pytest.approx(0.05, abs=1e-8)
    assert shift[-1.0] == pytest.approx(-0.05, abs=1e-8)
    for d in (0.05, 0.3, 1.0):
        assert shift[-d] == pytest.approx(-shift[d], abs=1e-8)
    head, rows = read_csv(tmp_path / "fig1c_spectra.csv")
    assert head == ["delta", "energy", "density"]
    pure = np.array([[float(v) for v in r] for r in rows if float(r[0]) == 1.0])
    lor = (1 / (2 * math.pi)) / ((pure[:, 1] - 0.05) ** 2 + 0.25)
    assert np.allclose(pure[:, 2], lor, rtol=1e-12)


def test_fig1c_degenerate_rows_are_flagged(tmp_path):
    code = main(["fig1c", "--delta-e", "0", "--delta-range=-0.5,0,0.5", "--grid-points", "11", "--out", str(tmp_path)])
    assert code == 0
    _, rows = read_csv(tmp_path / "fig1c_shifts.csv")
    assert [r[4] for r in rows] == ["0", "1", "0"]
    assert rows[1][1] == "nan"


def test_fig2_contents(tmp_path):
    assert run("fig2", tmp_path) == 0
    head, rows = read_csv(tmp_path / "fig2_matrix.csv")
    assert head == ["delta", "delta_e", "exact_shift", "amplification"]
    data = np.array([[float(v) for v in r] for r in rows])
    assert data.shape == (4 * 30, 4)
    assert np.all(data[data[:, 1] == 0, 2] == 0)
    for de in (0.05, 0.1, 0.2):
        block = data[data[:, 1] == de]
        best = block[np.argmax(block[:, 2]), 0]
        assert de / math.sqrt(2) / 2 <= best <= 2 * de / math.sqrt(2)


def test_fig3_contents(tmp_path):
    assert run("fig3", tmp_path) == 0
    head, rows = read_csv(tmp_path / "fig3_snr.csv")
    assert head == ["rate", "snr_no_noise", "snr_conventional", "snr_wva", "method"]
    data = np.array([[float(v) for v in r[:4]] for r in rows])
    # no-noise column is the sqrt(N) envelope
    ratio = data[1:, 1] / data[:-1, 1]
    assert np.allclose(ratio, np.sqrt(data[1:, 0] / data[:-1, 0]), rtol=0.01)
    assert np.all(data[:, 1] >= data[:, 2])
    _, inset = read_csv(tmp_path / "fig3_inset.csv")
    s = [float(r[1]) for r in inset]
    assert 0 < int(np.argmax(s)) < len(s) - 1


def test_fig4_contents(tmp_path):
    assert run("fig4", tmp_path) == 0
    head, rows = read_csv(tmp_path / "fig4_map.csv")
    assert head == ["gamma", "delta", "shift", "amplification"]
    fig2 = tmp_path / "fig2"
    assert main(["fig2", "--delta-range", "0.01:1:6:log", "--delta-e-range", "0.1", "--out", str(fig2)]) == 0
    _, ref = read_csv(fig2 / "fig2_matrix.csv")
    zero = [r for r in rows if float(r[0]) == 0]
    assert [float(r[2]) for r in zero] == pytest.approx([float(r[2]) for r in ref], abs=1e-12)
    _, opt = read_csv(tmp_path / "fig4_optcurve.csv")
    d = [float(r[1]) for r in opt]
    assert np.all(np.diff(d) >= 0)
    assert d[0] == pytest.approx(optimal_delta(SpectralParams(0, 0.1, 1)).delta_opt, abs=1e-5)
    _, inset = read_csv(tmp_path / "fig4_inset.csv")
    for de in ("0.050000000000000003", "0.10000000000000001"):
        amps = [float(r[2]) for r in inset if r[0] == de]
        assert len(amps) == 3 and np.all(np.diff(amps) < 0)


def test_svg_output(tmp_path):
    pytest.importorskip("matplotlib")
    assert run("fig2", tmp_path, "--svg") == 0
    svg = (tmp_path / "fig2.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


@pytest.mark.parametrize(
    "argv,code",
    [
        (["bogus"], EXIT_CONFIG),
        (["shift", "--delta", "1.5"], EXIT_CONFIG),
        (["shift", "--gamma", "-1"], EXIT_CONFIG),
        (["shift", "--delta-e", "-0.1"], EXIT_CONFIG),
        (["fig2", "--delta-range", "0:1"], EXIT_CONFIG),
        (["fig2", "--delta-range", "0:1:5:exp"], EXIT_CONFIG),
        (["snr", "--pump-rate", "2"], EXIT_CONFIG),
        (["shift", "--delta", "0", "--delta-e", "0"], EXIT_NUMERIC),
        (["snr", "--total-time", "0.5", "--pump-rate", "1"], EXIT_NUMERIC),
    ],
)
def test_exit_codes(argv, code, tmp_path, capsys):
    assert main([*argv, "--out", str(tmp_path / "o")]) == code


def test_io_errors(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["shift", "--out", str(blocker / "sub")]) == EXIT_IO
    assert main(["shift", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["shift", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_parse_range():
    assert parse_range("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_range("1:100:3:log") == pytest.approx([1, 10, 100])
    assert parse_range("0.1, 0.2") == [0.1, 0.2]
    assert parse_range([1, 2]) == [1.0, 2.0]
    assert parse_range("0.3") == [0.3]
    assert len(parse_range("fig1c")) == 86


def test_console_script(tmp_path):
    exe = shutil.which("wva-probe")
    cmd = [exe] if exe else [sys.executable, "-m", "wva_probe.cli"]
    proc = subprocess.run([*cmd, "shift", "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    head, rows = read_csv(tmp_path / "shift.csv")
    assert head[3] == "exact_shift"
    assert float(rows[0][3]) == pytest.approx(0.3562, abs=1e-3)
