"""Probe dephasing as a Lorentzian spread of the spin splitting.

Each emission sees a splitting ``delta_e + eps`` with ``eps`` drawn from a
Lorentzian of FWHM ``gamma_noise``; only the splitting is perturbed, never
``e0``.  Two ways of mixing the post-selected states are supported:

``paper_literal``
    average the normalised post-selected states with the noise density alone,
    so the mean shift is ``E_eps[shift(delta_e + eps)]``;
``probability_weighted``
    additionally weight each ``eps`` by its post-selection probability.

Both averages are principal values (the shift grows linearly in ``eps`` while
the density decays as ``eps^-2``) and are evaluated with mirrored ``+-eps``
nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, NoOptimumError, NumericError
from .numerics import QuadratureSpec, graded_breakpoints, paired_nodes, scan_then_refine
from .postselect import (
    PostSelection,
    ShiftResult,
    mean_energy_shift,
    probability_from_overlap,
    shift_closed_form,
)
from .spectral import SpectralParams

MIXINGS = ("paper_literal", "probability_weighted")

EPS_QUADRATURE = QuadratureSpec(order=16, panels=16, tolerance=1e-9)


@dataclass(frozen=True)
class DephasingModel:
    gamma_noise: float = 0.0
    mixing: str = "paper_literal"
    cutoff: Optional[float] = None  # None integrates the full line

    def __post_init__(self):
        if not (math.isfinite(self.gamma_noise) and self.gamma_noise >= 0):
            raise DomainError(f"gamma_noise must be >= 0, got {self.gamma_noise}")
        if self.mixing not in MIXINGS:
            raise DomainError(f"mixing must be one of {MIXINGS}, got {self.mixing!r}")
        if self.cutoff is not None and not self.cutoff > 0:
            raise DomainError("cutoff must be positive")

    def check_cutoff(self, gamma: float):
        if self.cutoff is not None and self.cutoff < 10.0 * max(self.gamma_noise, gamma):
            raise DomainError(
                f"cutoff {self.cutoff} is below 10 * max(gamma_noise, gamma) = {10 * max(self.gamma_noise, gamma)}"
            )


@dataclass(frozen=True)
class DephasedShift(ShiftResult):
    refinement_change: float = 0.0
    tail_residual: float = 0.0
    n_nodes: int = 0


def noise_pdf(eps, model: DephasingModel):
    """Lorentzian density of FWHM ``gamma_noise`` centred at zero."""
    g = model.gamma_noise
    if not g > 0:
        raise DomainError("gamma_noise = 0 is a delta distribution; use the pure post-selection path")
    eps = np.asarray(eps, dtype=float)
    return (g / (2.0 * math.pi)) / (eps * eps + 0.25 * g * g)


def _eps_support(params: SpectralParams, delta: float, gamma_noise: float):
    g = params.gamma
    de = params.delta_e
    # width of the dispersive feature of shift(x) around x = 0
    b = abs(delta) * g * math.sqrt(2.0 / (1.0 + delta * delta))
    widths = [w for w in (gamma_noise / 2.0, b, de, g) if w > 0]
    wmin = min(widths) / 4.0
    upper = 1e3 * max(g, gamma_noise, de)
    bps = [graded_breakpoints(0.0, wmin, upper)]
    if de > 0:
        bps.append(graded_breakpoints(de, wmin, upper))
    scale = max(gamma_noise, g) / 2.0
    return scale, np.concatenate(bps)


def _mixed_shift(params, sel, model, quad):
    d = sel.delta
    g = params.gamma
    de = params.delta_e
    scale, bps = _eps_support(params, d, model.gamma_noise)
    eps, w = paired_nodes(scale, quad, bps, model.cutoff)
    w = w * noise_pdf(eps, model)
    x_plus, x_minus = de + eps, de - eps
    if model.mixing == "paper_literal":
        paired = shift_closed_form(x_plus, g, d) + shift_closed_form(x_minus, g, d)
        value = float(np.sum(w * paired))
        prob = float(np.sum(w * (probability_from_overlap(x_plus, g, d) + probability_from_overlap(x_minus, g, d))))
    else:
        p_plus = probability_from_overlap(x_plus, g, d)
        p_minus = probability_from_overlap(x_minus, g, d)
        # P(x) * shift(x) = delta * x / 2
        num = float(np.sum(w * 0.5 * d * (x_plus + x_minus)))
        prob = float(np.sum(w * (p_plus + p_minus)))
        value = num / prob if prob > 0 else 0.0
    return value, prob, eps.size


def _tail_residual(params, sel, model):
    """Contribution of ``|eps| > cutoff`` from the large-|eps| form of the integrand."""
    if model.cutoff is None:
        return 0.0
    d = sel.delta
    mass = 1.0 - (2.0 / math.pi) * math.atan(2.0 * model.cutoff / model.gamma_noise)
    if model.mixing == "paper_literal":
        return d * params.delta_e / (1.0 + d * d) * mass
    return 0.0  # numerator pairs to a constant, denominator is bounded: truncation only renormalises


def dephased_shift(
    params: SpectralParams,
    sel: PostSelection,
    model: DephasingModel,
    quad: QuadratureSpec = EPS_QUADRATURE,
    check: bool = True,
) -> DephasedShift:
    """Mean probe shift after averaging over random splitting offsets.

    With ``check`` the estimate is repeated at doubled Gauss order and
    a :class:`NumericError` is raised if the two differ by more than
    ``quad.tolerance``.
    """
    if model.gamma_noise == 0:
        pure = mean_energy_shift(params, sel)
        return DephasedShift(pure.mean_shift, pure.probability, pure.amplification, pure.firstorder_shift)
    model.check_cutoff(params.gamma)
    value, prob, n = _mixed_shift(params, sel, model, quad)
    change = 0.0
    if check:
        fine, _, _ = _mixed_shift(params, sel, model, quad.refined())
        change = abs(fine - value)
        if not math.isfinite(value) or change > quad.tolerance * max(1.0, abs(value)):
            raise NumericError(
                "dephasing quadrature did not converge",
                value=value,
                refined=fine,
                change=change,
                tolerance=quad.tolerance,
                nodes=2 * n,
            )
    de = params.delta_e
    d = sel.delta
    return DephasedShift(
        mean_shift=value,
        probability=prob,
        amplification=value / de if de > 0 else None,
        firstorder_shift=de / (2.0 * d) if d != 0 else None,
        refinement_change=change,
        tail_residual=_tail_residual(params, sel, model),
        n_nodes=2 * n,
    )


def dephased_shift_closed_form(params: SpectralParams, delta: float, gamma_noise: float) -> float:
    """Residue evaluation of the ``paper_literal`` average on the full line.

    The exact shift is ``delta/(1+delta^2) * [x + (gamma^2 - b^2) x / (x^2 + b^2)]``
    with ``b^2 = 2 delta^2 gamma^2 / (1 + delta^2)``; averaging ``x/(x^2+b^2)``
    over a Lorentzian moves ``b`` to ``b + gamma_noise/2``.
    """
    g = params.gamma
    x = params.delta_e
    d2 = delta * delta
    b = abs(delta) * g * math.sqrt(2.0 / (1.0 + d2))
    c = b + gamma_noise / 2.0
    if x == 0:
        return 0.0
    return delta / (1.0 + d2) * (x + (g * g - b * b) * x / (x * x + c * c))


def default_delta_scan(n: int = 61, smallest: float = 1e-4) -> np.ndarray:
    return np.geomspace(smallest, 1.0, n)


@dataclass(frozen=True)
class GammaOptimum:
    gamma_noise: float
    delta_opt: float
    max_shift: float
    amplification: float


def optimal_shift_vs_gamma(
    params: SpectralParams,
    gamma_range: Sequence[float],
    mixing: str = "paper_literal",
    tol: float = 1e-7,
    quad: QuadratureSpec = EPS_QUADRATURE,
) -> list:
    """Per noise width, the delta maximising the dephased shift and that maximum."""
    if params.delta_e <= 0:
        raise NoOptimumError("zero splitting: no optimum post-selection")
    scan = default_delta_scan()
    rows = []
    for gn in gamma_range:
        model = DephasingModel(float(gn), mixing)

        def g(d):
            return dephased_shift(params, PostSelection(d), model, quad, check=False).mean_shift

        x, v = scan_then_refine(g, scan, tol)
        # convergence diagnostic at the optimum
        v = dephased_shift(params, PostSelection(x), model, quad, check=True).mean_shift
        rows.append(GammaOptimum(float(gn), x, v, v / params.delta_e))
    return rows


def optimal_amp_vs_ratio(
    delta_e_list: Sequence[float],
    ratio_range: Sequence[float],
    gamma: float = 1.0,
    mixing: str = "paper_literal",
    quad: QuadratureSpec = EPS_QUADRATURE,
) -> list:
    """Rows ``(delta_e, ratio, amplification_opt)`` for noise widths ``ratio * delta_e``."""
    out = []
    for de in delta_e_list:
        if not de > 0:
            raise NoOptimumError("all splittings must be positive")
        params = SpectralParams(0.0, float(de), gamma)
        rows = optimal_shift_vs_gamma(params, [r * de for r in ratio_range], mixing, quad=quad)
        out.extend((float(de), float(r), row.amplification) for r, row in zip(ratio_range, rows))
    return out
