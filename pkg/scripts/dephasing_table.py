"""Optimal post-selection and amplification versus dephasing width.

Prints both mixing conventions side by side together with the residue
closed form of the paper-literal average at the optimum.
"""

import argparse

from wva_probe.dephasing import dephased_shift_closed_form, optimal_shift_vs_gamma
from wva_probe.spectral import SpectralParams


def table(delta_e, gammas):
    p = SpectralParams(0.0, delta_e, 1.0)
    lit = optimal_shift_vs_gamma(p, gammas, "paper_literal")
    pw = optimal_shift_vs_gamma(p, gammas, "probability_weighted")
    print(f"delta_e = {delta_e}")
    print(f"{'gamma':>8} {'d_opt(lit)':>11} {'amp(lit)':>9} {'closed':>9} {'d_opt(pw)':>10} {'amp(pw)':>9}")
    for a, b in zip(lit, pw):
        closed = dephased_shift_closed_form(p, a.delta_opt, a.gamma_noise) / delta_e
        print(f"{a.gamma_noise:8.4f} {a.delta_opt:11.5f} {a.amplification:9.4f} {closed:9.4f} {b.delta_opt:10.5f} {b.amplification:9.4f}")
    print(f"amp(gamma = delta_e) / amp(0): paper_literal {lit_ratio(lit, delta_e):.4f}, probability_weighted {lit_ratio(pw, delta_e):.4f}")


def lit_ratio(rows, delta_e):
    at = {round(r.gamma_noise, 12): r.amplification for r in rows}
    return at.get(round(delta_e, 12), float("nan")) / rows[0].amplification


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta-e", type=float, nargs="+", default=[0.1])
    ap.add_argument("--gammas", type=float, nargs="+", default=[0.0, 0.02, 0.05, 0.1, 0.2, 0.5])
    args = ap.parse_args()
    for de in args.delta_e:
        gammas = sorted(set(args.gammas) | {de})
        table(de, gammas)
        print()
