"""Slow-noise SNR study: knee location versus tau_c and the WVA enhancement map.

The knee is the maximum-curvature point of the conventional SNR in log-log,
measured on rates with an integer event count so flooring adds no noise.
"""

import argparse

import numpy as np

from wva_probe.noise import SlowNoiseConfig, locate_knee, optimal_snr_delta, snr_analytic, snr_conventional
from wva_probe.spectral import SpectralParams


def knees(taus, total_time):
    print(f"{'tau_c':>8} {'knee rate':>11} {'rate*tau_c':>10}")
    for tau in taus:
        cfg = SlowNoiseConfig(tau_c=tau, total_time=total_time)
        lo = max(1e-3 / tau, 10.0 / total_time)
        rates = np.unique(np.round(np.geomspace(lo, 1.0, 601) * total_time)) / total_time
        snr = [snr_analytic(1.0, cfg, r).snr for r in rates]
        k = locate_knee(rates, snr)
        print(f"{tau:8g} {k:11.4e} {k * tau:10.4f}")


def enhancement(taus, splittings):
    print(f"{'tau_c':>8} " + " ".join(f"{'dE=' + format(de, 'g'):>10}" for de in splittings))
    for tau in taus:
        cfg = SlowNoiseConfig(tau_c=tau)
        cells = []
        for de in splittings:
            p = SpectralParams(0.0, de, 1.0)
            _, best = optimal_snr_delta(p, cfg)
            cells.append(best / snr_conventional(p, cfg).snr)
        print(f"{tau:8g} " + " ".join(f"{c:10.3f}" for c in cells))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--taus", type=float, nargs="+", default=[10.0, 100.0, 1e3, 1e4])
    ap.add_argument("--splittings", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.1, 0.2])
    ap.add_argument("--total-time", type=float, default=1e9)
    args = ap.parse_args()
    knees(args.taus, args.total_time)
    print()
    enhancement(args.taus, args.splittings)
