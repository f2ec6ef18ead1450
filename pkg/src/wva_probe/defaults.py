"""Versioned default parameters for the figure presets.

Most numerical parameters behind the published figures are not given, so
these are artifact choices.  Energies are in units of the linewidth, times in
units of the radiative lifetime.  Bump ``DEFAULTS_VERSION`` whenever a value
changes.
"""

DEFAULTS_VERSION = "1"

COMMON = {
    "e0": 0.0,
    "gamma": 1.0,
    "delta_e": 0.1,
    "delta": 0.0705,
    "gamma_noise": 0.0,
    "mixing": "paper_literal",
    "sigma": 1.0,
    "tau_c": 1e3,
    "t1": 1.0,
    "pump_rate": 1.0,
    "total_time": 1e6,
    "trials": 500,
    "seed": 20130101,
    "grid_points": 401,
    "grid_half_width": 4.0,
    "method": "analytic",
    "reoptimize": False,
    "svg": False,
    "out": "out",
}

# Ranges are "LO:HI:N" (linear) or "LO:HI:N:log" (geometric); "fig1c" is the
# signed, log-refined default of postselect.default_fig1c_deltas.
PER_COMMAND = {
    "fig1c": {"delta_range": "fig1c"},
    "fig2": {"delta_range": "0.005:1:60:log", "delta_e_range": "0:1:41"},
    "fig3": {"rate_range": "1e-5:1:61:log", "delta_range": "0.001:1:61:log"},
    "fig4": {
        "delta_range": "0.005:1:40:log",
        "gamma_noise_range": "0:0.5:26",
        "delta_e_list": "0.01,0.05,0.1",
        "ratio_range": "0:4:21",
    },
    "shift": {},
    "snr": {},
    "sweep": {"delta_range": "0.005:1:40:log"},
}
