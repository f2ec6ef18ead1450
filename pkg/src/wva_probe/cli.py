"""``wva-probe`` command line: figure presets and free-form sweeps.

Every run writes CSV tables plus ``meta.json`` into ``--out``.  ``meta.json``
is a flat object holding the fully resolved configuration; passing it back
with ``--config`` replays the run.  Precedence is flags > config file >
defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .defaults import COMMON, DEFAULTS_VERSION, PER_COMMAND
from .dephasing import DephasingModel, dephased_shift, optimal_amp_vs_ratio, optimal_shift_vs_gamma
from .errors import DegeneratePostSelectionError, DomainError, NoEventsError, NoOptimumError, NumericError, WVAError
from .noise import (
    SlowNoiseConfig,
    locate_knee,
    snr_conventional,
    snr_no_noise,
    snr_vs_delta,
    snr_wva,
    sweep_fig3,
)
from .numerics import RNG_ALGORITHM
from .postselect import PostSelection, default_fig1c_deltas, mean_energy_shift, sweep_fig1c, sweep_fig2
from .spectral import EnergyGrid, SpectralParams

COMMANDS = ("fig1c", "fig2", "fig3", "fig4", "shift", "snr", "sweep")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


@dataclass
class RunConfig:
    command: str
    e0: float
    gamma: float
    delta_e: float
    delta: float
    gamma_noise: float
    mixing: str
    sigma: float
    tau_c: float
    t1: float
    pump_rate: float
    total_time: float
    trials: int
    seed: int
    grid_points: int
    grid_half_width: float
    method: str
    reoptimize: bool
    svg: bool
    out: str
    delta_range: Optional[list] = None
    delta_e_range: Optional[list] = None
    rate_range: Optional[list] = None
    gamma_noise_range: Optional[list] = None
    delta_e_list: Optional[list] = None
    ratio_range: Optional[list] = None

    @property
    def params(self) -> SpectralParams:
        return SpectralParams(self.e0, self.delta_e, self.gamma)

    @property
    def noise(self) -> SlowNoiseConfig:
        return SlowNoiseConfig(
            sigma=self.sigma,
            tau_c=self.tau_c,
            t1=self.t1,
            pump_rate=self.pump_rate,
            total_time=self.total_time,
            trials=self.trials,
            seed=self.seed,
        )


RANGE_KEYS = ("delta_range", "delta_e_range", "rate_range", "gamma_noise_range", "delta_e_list", "ratio_range")


def parse_range(text) -> list:
    """``LO:HI:N`` (linear), ``LO:HI:N:log`` (geometric) or ``a,b,c``; lists pass through."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if text == "fig1c":
        return [float(v) for v in default_fig1c_deltas()]
    if "," in text or ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise DomainError(f"bad range {text!r}; expected LO:HI:N or LO:HI:N:log")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise DomainError(f"range {text!r} needs N >= 1")
    if len(parts) == 4:
        if parts[3] != "log":
            raise DomainError(f"unknown range spacing {parts[3]!r}")
        if lo <= 0 or hi <= 0:
            raise DomainError("log ranges need positive bounds")
        return [float(v) for v in np.geomspace(lo, hi, n)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wva-probe", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--delta-e", type=float, help="splitting, units of gamma")
    ap.add_argument("--gamma", type=float, help="linewidth (FWHM); 1 sets the unit")
    ap.add_argument("--e0", type=float, help="central energy")
    ap.add_argument("--delta", type=float, help="post-selection parameter")
    ap.add_argument("--delta-range", help="LO:HI:N[:log] or comma list")
    ap.add_argument("--delta-e-range", help="splittings for fig2/sweep")
    ap.add_argument("--rate-range", help="pump rates for fig3, units of 1/T1")
    ap.add_argument("--gamma-noise", type=float, help="dephasing width (FWHM)")
    ap.add_argument("--gamma-noise-range", help="dephasing widths for fig4")
    ap.add_argument("--delta-e-list", help="splittings for the fig4 inset")
    ap.add_argument("--ratio-range", help="gamma_noise/delta_e values for the fig4 inset")
    ap.add_argument("--mixing", choices=("paper_literal", "probability_weighted"))
    ap.add_argument("--sigma", type=float, help="per-event noise std")
    ap.add_argument("--tau-c", type=float, help="noise correlation time")
    ap.add_argument("--t1", type=float, help="excited-state lifetime")
    ap.add_argument("--pump-rate", type=float, help="attempt rate, <= 1/t1")
    ap.add_argument("--total-time", type=float)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--method", choices=("analytic", "monte_carlo"))
    ap.add_argument("--reoptimize", action="store_true", default=None, help="re-tune delta per rate (fig3)")
    ap.add_argument("--grid-points", type=int)
    ap.add_argument("--grid-half-width", type=float)
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--svg", action="store_true", default=None)
    ap.add_argument("--config", help="JSON config file (e.g. a previous meta.json)")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(COMMON)
    values.update(PER_COMMAND[args.command])
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        names = {f.name for f in fields(RunConfig)}
        values.update({k: v for k, v in loaded.items() if k in names and k != "command"})
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    for key in RANGE_KEYS:
        if values.get(key) is not None:
            values[key] = parse_range(values[key])
    values["command"] = args.command
    cfg = RunConfig(**{f.name: values.get(f.name) for f in fields(RunConfig)})
    cfg.trials = int(cfg.trials)
    cfg.seed = int(cfg.seed)
    cfg.grid_points = int(cfg.grid_points)
    return cfg


def _fmt(v) -> str:
    if v is None:
        return "nan"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _opt(v):
    return math.nan if v is None else v


def run_fig1c(cfg: RunConfig, out: Path):
    params = cfg.params
    grid = EnergyGrid(params.e0, cfg.grid_half_width, cfg.grid_points, "linear")
    rows = sweep_fig1c(params, cfg.delta_range, grid)
    spectra = []
    for r in rows:
        if r.spectrum is None:
            continue
        spectra.extend((r.delta, e, p) for e, p in zip(grid.nodes, r.spectrum.density))
    write_csv(out / "fig1c_spectra.csv", ("delta", "energy", "density"), spectra)
    write_csv(
        out / "fig1c_shifts.csv",
        ("delta", "exact_shift", "firstorder_shift", "probability", "flagged"),
        [(r.delta, r.mean_shift, r.firstorder_shift, r.probability, r.flagged) for r in rows],
    )
    files = ["fig1c_spectra.csv", "fig1c_shifts.csv"]
    if cfg.svg:
        from .plotting import fig1c_svg

        fig1c_svg(out / "fig1c.svg", grid, rows)
        files.append("fig1c.svg")
    diag = {"diag_flagged_rows": int(sum(r.flagged for r in rows)), "diag_rows": len(rows)}
    return files, diag


def run_fig2(cfg: RunConfig, out: Path):
    deltas, des = cfg.delta_range, cfg.delta_e_range
    mat = sweep_fig2(cfg.params, deltas, des)
    rows = []
    for i, de in enumerate(des):
        for j, d in enumerate(deltas):
            rows.append((d, de, mat[i, j], mat[i, j] / de if de > 0 else math.nan))
    write_csv(out / "fig2_matrix.csv", ("delta", "delta_e", "exact_shift", "amplification"), rows)
    files = ["fig2_matrix.csv"]
    if cfg.svg:
        from .plotting import heatmap_svg

        heatmap_svg(out / "fig2.svg", deltas, des, mat, "delta", "delta_e", "mean shift")
        files.append("fig2.svg")
    return files, {"diag_max_shift": float(np.max(mat))}


def run_fig3(cfg: RunConfig, out: Path):
    params, noise = cfg.params, cfg.noise
    rates = cfg.rate_range
    rows = sweep_fig3(params, PostSelection(cfg.delta), noise, rates, cfg.reoptimize, cfg.method)
    write_csv(
        out / "fig3_snr.csv",
        ("rate", "snr_no_noise", "snr_conventional", "snr_wva", "method"),
        [(r.rate, r.snr_no_noise, r.snr_conventional, r.snr_wva, r.method) for r in rows],
    )
    deltas = cfg.delta_range
    inset = snr_vs_delta(params, noise, deltas)
    write_csv(out / "fig3_inset.csv", ("delta", "snr"), list(zip(deltas, inset)))
    files = ["fig3_snr.csv", "fig3_inset.csv"]
    if cfg.svg:
        from .plotting import fig3_svg

        fig3_svg(out / "fig3.svg", rows, deltas, inset)
        files.append("fig3.svg")
    conv = [r.snr_conventional for r in rows]
    diag = {
        "diag_knee_rate": locate_knee(rates, conv) if len(rates) >= 5 else math.nan,
        "diag_inset_argmax_delta": float(deltas[int(np.argmax(inset))]),
        "diag_ceiling_enhancement": rows[-1].snr_wva / rows[-1].snr_conventional,
    }
    return files, diag


def run_fig4(cfg: RunConfig, out: Path):
    params = cfg.params
    gammas, deltas = cfg.gamma_noise_range, cfg.delta_range
    shift = np.empty((len(gammas), len(deltas)))
    worst = 0.0
    for i, gn in enumerate(gammas):
        model = DephasingModel(gn, cfg.mixing)
        for j, d in enumerate(deltas):
            res = dephased_shift(params, PostSelection(d), model)
            shift[i, j] = res.mean_shift
            worst = max(worst, res.refinement_change)
    de = params.delta_e
    write_csv(
        out / "fig4_map.csv",
        ("gamma", "delta", "shift", "amplification"),
        [
            (gn, d, shift[i, j], shift[i, j] / de if de > 0 else math.nan)
            for i, gn in enumerate(gammas)
            for j, d in enumerate(deltas)
        ],
    )
    opt = optimal_shift_vs_gamma(params, gammas, cfg.mixing)
    write_csv(
        out / "fig4_optcurve.csv",
        ("gamma", "delta_opt", "max_shift"),
        [(r.gamma_noise, r.delta_opt, r.max_shift) for r in opt],
    )
    inset = optimal_amp_vs_ratio(cfg.delta_e_list, cfg.ratio_range, params.gamma, cfg.mixing)
    write_csv(out / "fig4_inset.csv", ("delta_e", "ratio", "amplification_opt"), inset)
    files = ["fig4_map.csv", "fig4_optcurve.csv", "fig4_inset.csv"]
    if cfg.svg:
        from .plotting import fig4_svg

        fig4_svg(out / "fig4.svg", deltas, gammas, shift, opt, inset)
        files.append("fig4.svg")
    return files, {"diag_max_refinement_change": worst}


def run_shift(cfg: RunConfig, out: Path):
    params, sel = cfg.params, PostSelection(cfg.delta)
    if cfg.gamma_noise > 0:
        res = dephased_shift(params, sel, DephasingModel(cfg.gamma_noise, cfg.mixing))
    else:
        res = mean_energy_shift(params, sel)
    write_csv(
        out / "shift.csv",
        ("delta", "delta_e", "gamma_noise", "exact_shift", "firstorder_shift", "probability", "amplification"),
        [(cfg.delta, cfg.delta_e, cfg.gamma_noise, res.mean_shift, _opt(res.firstorder_shift), res.probability, _opt(res.amplification))],
    )
    return ["shift.csv"], {}


def run_snr(cfg: RunConfig, out: Path):
    params, noise = cfg.params, cfg.noise
    wva = snr_wva(params, PostSelection(cfg.delta), noise, cfg.method)
    write_csv(
        out / "snr.csv",
        ("rate", "delta", "snr_no_noise", "snr_conventional", "snr_wva", "method", "std_error"),
        [
            (
                cfg.pump_rate,
                cfg.delta,
                snr_no_noise(params.delta_e, noise).snr,
                snr_conventional(params, noise).snr,
                wva.snr,
                wva.method,
                _opt(wva.std_error),
            )
        ],
    )
    return ["snr.csv"], {}


def run_sweep(cfg: RunConfig, out: Path):
    des = cfg.delta_e_range or [cfg.delta_e]
    model = DephasingModel(cfg.gamma_noise, cfg.mixing)
    rows = []
    for de in des:
        params = SpectralParams(cfg.e0, de, cfg.gamma)
        for d in cfg.delta_range:
            sel = PostSelection(d)
            try:
                res = dephased_shift(params, sel, model)
            except DegeneratePostSelectionError as exc:
                rows.append((d, de, cfg.gamma_noise, math.nan, math.nan, exc.probability, math.nan))
                continue
            rows.append((d, de, cfg.gamma_noise, res.mean_shift, _opt(res.firstorder_shift), res.probability, _opt(res.amplification)))
    write_csv(
        out / "sweep.csv",
        ("delta", "delta_e", "gamma_noise", "exact_shift", "firstorder_shift", "probability", "amplification"),
        rows,
    )
    return ["sweep.csv"], {}


RUNNERS = {
    "fig1c": run_fig1c,
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fig4": run_fig4,
    "shift": run_shift,
    "snr": run_snr,
    "sweep": run_sweep,
}


def execute(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    files, diag = RUNNERS[cfg.command](cfg, out)
    meta = asdict(cfg)
    meta.update(
        version=__version__,
        defaults_version=DEFAULTS_VERSION,
        rng_algorithm=RNG_ALGORITHM,
        duration_s=time.perf_counter() - t0,
        outputs=files,
        preset_note="defaults are artifact choices; see wva_probe.defaults",
    )
    meta.update(diag)
    with open(out / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")
    return meta


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        cfg.params  # validate early
        PostSelection(cfg.delta)
    except (DomainError, ValueError, TypeError, json.JSONDecodeError) as exc:
        print(f"wva-probe: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"wva-probe: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        meta = execute(cfg)
    except DomainError as exc:
        print(f"wva-probe: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, DegeneratePostSelectionError, NoOptimumError, NoEventsError, WVAError) as exc:
        print(f"wva-probe: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"wva-probe: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {', '.join(meta['outputs'])} and meta.json to {cfg.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
