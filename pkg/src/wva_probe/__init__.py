"""Weak-value-amplified spectroscopy of a split, lifetime-broadened doublet.

Energies are in units of the linewidth gamma, times in units of 1/gamma.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DegeneratePostSelectionError,
    DomainError,
    NoEventsError,
    NoOptimumError,
    NumericError,
    PumpCeilingError,
    WVAError,
)
from .spectral import EnergyGrid, SpectralParams, branch_overlap, lineshape_amplitude, lineshape_firstorder
from .postselect import (
    PostSelection,
    ShiftResult,
    Spectrum,
    mean_energy_shift,
    optimal_delta,
    postselected_amplitude,
    postselected_spectrum,
    postselection_probability_approx,
    postselection_probability_exact,
)
from .dephasing import DephasingModel, dephased_shift, noise_pdf, optimal_amp_vs_ratio, optimal_shift_vs_gamma
from .noise import SlowNoiseConfig, SnrResult, snr_analytic, snr_monte_carlo, snr_wva
