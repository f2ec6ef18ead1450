"""Polarisation post-selection of the two-branch photon state.

The photon leaves the cascade in ``(|H> f_H + |V> f_V)/sqrt(2)`` and is projected
onto ``[(1 - delta)|H> - (1 + delta)|V>]/sqrt(2)``.  What survives is the energy
amplitude ``A(E) = [(1 - delta) f_H(E) - (1 + delta) f_V(E)] / 2`` whose squared
norm is the success probability ``P``.

Mean energies of these spectra only exist as symmetric principal values about
``e0`` (the density has ``1/E^2`` tails), and that is how they are computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegeneratePostSelectionError, DomainError, NoOptimumError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, golden_section, paired_nodes
from .spectral import (
    EnergyGrid,
    SpectralParams,
    branch_overlap,
    branch_overlap_closed_form,
    lineshape_amplitude,
    spectral_quadrature_support,
)

PROBABILITY_FLOOR = 1e-14


@dataclass(frozen=True)
class PostSelection:
    delta: float

    def __post_init__(self):
        d = self.delta
        if isinstance(d, complex) or not math.isfinite(d):
            raise DomainError(f"delta must be a finite real number, got {d!r}")
        if abs(d) > 1:
            raise DomainError(f"|delta| must be <= 1, got {d}")


@dataclass(frozen=True)
class Spectrum:
    grid: EnergyGrid
    density: np.ndarray
    probability: float

    def total(self) -> float:
        """Integral of the density using the grid weights."""
        return float(np.sum(self.grid.weights * self.density))


@dataclass(frozen=True)
class ShiftResult:
    mean_shift: float
    probability: float
    amplification: Optional[float] = None  # undefined for zero splitting
    firstorder_shift: Optional[float] = None  # undefined for delta = 0


def postselected_amplitude(E, params: SpectralParams, sel: PostSelection):
    """Unnormalised post-selected amplitude (no 1/sqrt(P) factor)."""
    d = sel.delta
    fh = lineshape_amplitude(E, params.center_h, params.gamma)
    fv = lineshape_amplitude(E, params.center_v, params.gamma)
    return 0.5 * ((1.0 - d) * fh - (1.0 + d) * fv)


def probability_from_overlap(delta_e, gamma, delta):
    """Success probability from the branch-overlap identity.

    ``P = [(1-d)^2 + (1+d)^2 - 2 (1-d^2) Re O] / 4`` with ``O`` the branch
    overlap; vectorised over (signed) ``delta_e``.
    """
    re_o = branch_overlap_closed_form(delta_e, gamma).real
    return 0.25 * ((1.0 - delta) ** 2 + (1.0 + delta) ** 2 - 2.0 * (1.0 - delta * delta) * re_o)


def shift_closed_form(delta_e, gamma, delta):
    """Exact principal-value mean shift, ``delta * delta_e / (2 P)``.

    Written as a rational function of the splitting so it stays finite and
    accurate for ``delta -> 0`` and for signed or very large ``delta_e``.
    """
    x = np.asarray(delta_e, dtype=float)
    g2 = gamma * gamma
    d2 = delta * delta
    den = 2.0 * d2 * g2 + (1.0 + d2) * x * x
    with np.errstate(invalid="ignore", divide="ignore"):
        out = delta * x * (g2 + x * x) / den
    return np.where(den > 0, out, 0.0)


def _quadrature_moments(params: SpectralParams, sel: PostSelection, quad: QuadratureSpec):
    scale, bps = spectral_quadrature_support(params.delta_e, params.gamma)
    x, w = paired_nodes(scale, quad, bps)
    e0 = params.e0
    a_plus = np.abs(postselected_amplitude(e0 + x, params, sel)) ** 2
    a_minus = np.abs(postselected_amplitude(e0 - x, params, sel)) ** 2
    prob = float(np.sum(w * (a_plus + a_minus)))
    first = float(np.sum(w * x * (a_plus - a_minus)))
    return prob, first


def postselection_probability_exact(
    params: SpectralParams,
    sel: PostSelection,
    method: str = "quadrature",
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Norm of the post-selected amplitude, by quadrature or the overlap identity."""
    if method == "quadrature":
        return _quadrature_moments(params, sel, quad)[0]
    if method == "overlap":
        d = sel.delta
        re_o = branch_overlap(params).real
        return 0.25 * ((1 - d) ** 2 + (1 + d) ** 2 - 2 * (1 - d * d) * re_o)
    raise DomainError(f"unknown probability method {method!r}")


def postselection_probability_approx(params: SpectralParams, sel: PostSelection) -> float:
    """Small-splitting estimate ``delta^2 + delta_e^2 / (2 gamma^2)``.

    Only meaningful for ``delta_e << gamma``; not enforced.
    """
    return sel.delta**2 + params.delta_e**2 / (2.0 * params.gamma**2)


def postselected_spectrum(
    params: SpectralParams,
    sel: PostSelection,
    grid: EnergyGrid,
    floor: float = PROBABILITY_FLOOR,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> Spectrum:
    if abs(grid.center - params.e0) > 1e-12 * max(1.0, abs(params.e0)):
        raise DomainError("energy grid must be centred on e0")
    prob = postselection_probability_exact(params, sel, "quadrature", quad)
    if prob <= floor:
        raise DegeneratePostSelectionError(prob, floor)
    density = np.abs(postselected_amplitude(grid.nodes, params, sel)) ** 2 / prob
    return Spectrum(grid, density, prob)


def mean_energy_shift(
    params: SpectralParams,
    sel: PostSelection,
    method: str = "quadrature",
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    floor: float = PROBABILITY_FLOOR,
) -> ShiftResult:
    """Mean energy of the post-selected photon relative to ``e0``.

    ``method="quadrature"`` sums mirrored nodes about ``e0`` (symmetric
    principal value); ``method="closed_form"`` uses ``delta*delta_e/(2P)``.
    """
    d = sel.delta
    if method == "quadrature":
        prob, first = _quadrature_moments(params, sel, quad)
        if prob <= floor:
            raise DegeneratePostSelectionError(prob, floor)
        shift = first / prob
    elif method == "closed_form":
        prob = float(probability_from_overlap(params.delta_e, params.gamma, d))
        if prob <= floor:
            raise DegeneratePostSelectionError(prob, floor)
        shift = float(shift_closed_form(params.delta_e, params.gamma, d))
    else:
        raise DomainError(f"unknown shift method {method!r}")
    amp = shift / params.delta_e if params.delta_e > 0 else None
    fo = params.delta_e / (2.0 * d) if d != 0 else None
    return ShiftResult(shift, prob, amp, fo)


@dataclass(frozen=True)
class OptimalDelta:
    delta_opt: float
    max_shift: float
    amplification: float
    # reference values for comparison
    delta_opt_approx: float  # delta_e / (sqrt(2) gamma)
    amplification_approx: float  # gamma / (2 sqrt(2) delta_e)
    delta_opt_exact: float  # delta_e / sqrt(2 gamma^2 + delta_e^2)
    iterations: int

    def __iter__(self):
        # unpacks as (delta_opt, max_shift)
        return iter((self.delta_opt, self.max_shift))


def optimal_delta(
    params: SpectralParams,
    tol: float = 1e-6,
    method: str = "quadrature",
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> OptimalDelta:
    """Post-selection parameter in (0, 1] that maximises the mean shift."""
    if params.delta_e <= 0:
        raise NoOptimumError("zero splitting: the shift vanishes for every delta")

    def g(d):
        return mean_energy_shift(params, PostSelection(d), method, quad).mean_shift

    x, v, it = golden_section(g, 0.0, 1.0, tol)
    de, ga = params.delta_e, params.gamma
    return OptimalDelta(
        delta_opt=x,
        max_shift=v,
        amplification=v / de,
        delta_opt_approx=de / (math.sqrt(2.0) * ga),
        amplification_approx=ga / (2.0 * math.sqrt(2.0) * de),
        delta_opt_exact=de / math.sqrt(2.0 * ga * ga + de * de),
        iterations=it,
    )


@dataclass(frozen=True)
class Fig1cRow:
    delta: float
    spectrum: Optional[Spectrum]
    mean_shift: float
    firstorder_shift: float
    probability: float
    flagged: bool = False


def default_fig1c_deltas(n_log: int = 25, n_lin: int = 19, smallest: float = 3e-3) -> np.ndarray:
    """Signed delta values on [-1, 1], log-refined towards zero."""
    pos = np.unique(np.concatenate((np.geomspace(smallest, 0.1, n_log), np.linspace(0.1, 1.0, n_lin))))
    return np.concatenate((-pos[::-1], pos))


def sweep_fig1c(
    params: SpectralParams,
    delta_range: Sequence[float],
    grid: EnergyGrid,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    floor: float = PROBABILITY_FLOOR,
) -> list:
    """Post-selected spectra plus exact and first-order shifts per delta.

    Degenerate post-selections (P below ``floor``) become flagged rows with
    NaN entries rather than raising.
    """
    rows = []
    for d in delta_range:
        sel = PostSelection(float(d))
        try:
            spec = postselected_spectrum(params, sel, grid, floor, quad)
            res = mean_energy_shift(params, sel, "quadrature", quad, floor)
        except DegeneratePostSelectionError as exc:
            rows.append(Fig1cRow(float(d), None, math.nan, math.nan, exc.probability, True))
            continue
        fo = res.firstorder_shift if res.firstorder_shift is not None else math.nan
        rows.append(Fig1cRow(float(d), spec, res.mean_shift, fo, res.probability))
    return rows


def sweep_fig2(
    params_base: SpectralParams,
    delta_range: Sequence[float],
    delta_e_range: Sequence[float],
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Exact mean shift on a (delta_e, delta) lattice; rows follow ``delta_e_range``."""
    out = np.empty((len(delta_e_range), len(delta_range)))
    for i, de in enumerate(delta_e_range):
        p = SpectralParams(params_base.e0, float(de), params_base.gamma)
        for j, d in enumerate(delta_range):
            out[i, j] = mean_energy_shift(p, PostSelection(float(d)), "quadrature", quad).mean_shift
    return out
