"""Complex Lorentzian amplitude lineshapes for the two exciton branches.

Energies are in units of the linewidth by convention (``gamma = 1``), with
``hbar = 1`` so times are in units of ``1/gamma``.  The H branch sits at
``e0 - delta_e/2`` and the V branch at ``e0 + delta_e/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, graded_breakpoints, integrate_transformed


@dataclass(frozen=True)
class SpectralParams:
    e0: float = 0.0
    delta_e: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma}")
        if not (math.isfinite(self.delta_e) and self.delta_e >= 0):
            raise DomainError(f"delta_e must be >= 0, got {self.delta_e}")
        if not math.isfinite(self.e0):
            raise DomainError("e0 must be finite")

    @property
    def center_h(self) -> float:
        return self.e0 - self.delta_e / 2.0

    @property
    def center_v(self) -> float:
        return self.e0 + self.delta_e / 2.0


def lineshape_amplitude(E, center, gamma):
    """sqrt(gamma/2pi) / ((E - center) + i gamma/2); vectorised over ``E``."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    E = np.asarray(E, dtype=float)
    return math.sqrt(gamma / (2.0 * math.pi)) / ((E - center) + 0.5j * gamma)


def lineshape_firstorder(E, params: SpectralParams, branch_sign: int):
    """Linearisation of the branch lineshape at ``e0 + branch_sign * delta_e/2``
    in the small-splitting limit."""
    if branch_sign not in (1, -1):
        raise DomainError("branch_sign must be +1 or -1")
    E = np.asarray(E, dtype=float)
    g = params.gamma
    z = (E - params.e0) + 0.5j * g
    base = math.sqrt(g / (2.0 * math.pi)) / z
    return base + branch_sign * math.sqrt(g / (2.0 * math.pi)) * (params.delta_e / 2.0) / (z * z)


def spectral_quadrature_support(delta_e: float, gamma: float):
    """Tan-substitution scale and breakpoints that resolve both branch peaks."""
    half = abs(delta_e) / 2.0
    scale = gamma / 2.0
    bps = graded_breakpoints(half, gamma / 4.0, 1e3 * max(gamma, half)) if half > 0 else ()
    return scale, bps


def branch_overlap_closed_form(delta_e, gamma):
    """Overlap of the H and V branch amplitudes, gamma / (gamma + i delta_e).

    Accepts signed or array-valued ``delta_e``.
    """
    return gamma / (gamma + 1j * np.asarray(delta_e, dtype=float))


def branch_overlap_quadrature(params: SpectralParams, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> complex:
    scale, bps = spectral_quadrature_support(params.delta_e, params.gamma)

    def integrand(E):
        return np.conj(lineshape_amplitude(E, params.center_h, params.gamma)) * lineshape_amplitude(
            E, params.center_v, params.gamma
        )

    re = integrate_transformed(lambda E: integrand(E).real, params.e0, scale, quad, bps)
    im = integrate_transformed(lambda E: integrand(E).imag, params.e0, scale, quad, bps)
    return complex(re, im)


def branch_overlap(params: SpectralParams, method: str = "closed_form", quad: QuadratureSpec = DEFAULT_QUADRATURE) -> complex:
    """Inner product of the H-branch and V-branch lineshapes.

    The closed form comes from contour integration; ``method="quadrature"``
    evaluates the integral directly and is kept for auditing.
    """
    if method == "closed_form":
        return complex(branch_overlap_closed_form(params.delta_e, params.gamma))
    if method == "quadrature":
        return branch_overlap_quadrature(params, quad)
    raise DomainError(f"unknown overlap method {method!r}")


@dataclass(frozen=True)
class EnergyGrid:
    """Sampling grid symmetric about ``center`` with an odd number of nodes.

    ``mapping="linear"`` spaces nodes evenly over ``center +- half_width``.
    ``mapping="tan"`` places them at ``center + half_width * tan(theta)`` with
    ``theta`` on a midpoint lattice of ``(-pi/2, pi/2)``, so the grid covers the
    whole line and ``weights`` integrate Lorentzian-tailed densities.
    """

    center: float = 0.0
    half_width: float = 4.0
    n_points: int = 401
    mapping: str = "linear"

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("half_width must be positive")
        if self.n_points < 1 or self.n_points % 2 == 0:
            raise DomainError(f"n_points must be a positive odd integer, got {self.n_points}")
        if self.mapping not in ("linear", "tan"):
            raise DomainError(f"unknown grid mapping {self.mapping!r}")

    @cached_property
    def _offsets(self):
        m = (self.n_points - 1) // 2
        k = np.arange(1, m + 1, dtype=float)
        if self.mapping == "linear":
            pos = self.half_width * k / m if m else k
        else:
            pos = self.half_width * np.tan(k * math.pi / self.n_points)
        return np.concatenate((-pos[::-1], [0.0], pos))

    @property
    def nodes(self) -> np.ndarray:
        return self.center + self._offsets

    @property
    def weights(self) -> np.ndarray:
        """dE quadrature weights (trapezoid for linear, midpoint-in-theta for tan)."""
        if self.mapping == "linear":
            h = 2.0 * self.half_width / (self.n_points - 1) if self.n_points > 1 else 0.0
            w = np.full(self.n_points, h)
            w[0] = w[-1] = h / 2.0
            return w
        m = (self.n_points - 1) // 2
        theta = np.arange(-m, m + 1) * math.pi / self.n_points
        return (math.pi / self.n_points) * self.half_width / np.cos(theta) ** 2

    @classmethod
    def for_params(cls, params: SpectralParams, n_points: int = 401, mapping: str = "linear", half_width=None):
        if half_width is None:
            half_width = params.gamma / 2.0 if mapping == "tan" else 4.0 * params.gamma + params.delta_e
        return cls(params.e0, half_width, n_points, mapping)
