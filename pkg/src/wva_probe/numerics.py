"""Shared numerical machinery: transformed quadrature, golden-section search, RNG streams.

Heavy-tailed integrals over the real line are evaluated with the substitution
``x = center + scale * tan(theta)`` and composite Gauss-Legendre panels on
``theta in [0, pi/2)``.  Every node is used twice, at ``center + x`` and
``center - x``, and the two integrand values are summed *before* they are
weighted.  This pairing is what gives principal-value integrals (first moments
of Lorentzians, odd integrands growing like ``1/x``) a well-defined limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, NumericError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

RNG_ALGORITHM = "numpy.random.PCG64 seeded by SeedSequence(entropy=seed, spawn_key=(stream_id,))"


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule on the transformed half-interval.

    ``order`` nodes per panel, ``panels`` equal panels over ``[0, pi/2)`` (extra
    breakpoints requested by a call site are merged in).  ``tolerance`` is the
    acceptance threshold for order-doubling convergence checks.
    """

    order: int = 16
    panels: int = 32
    transform: str = "tan_substitution"
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.order < 2:
            raise DomainError(f"quadrature order must be >= 2, got {self.order}")
        if self.panels < 1:
            raise DomainError(f"panels must be >= 1, got {self.panels}")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.transform not in ("tan_substitution", "linear"):
            raise DomainError(f"unknown transform {self.transform!r}")

    def refined(self) -> "QuadratureSpec":
        """Same panels with twice the Gauss order.

        Doubling the order (not the uniform panel count) refines every panel,
        including those bounded by call-site breakpoints.
        """
        return replace(self, order=2 * self.order)


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class OptimizerSpec:
    lo: float = 0.0
    hi: float = 1.0
    tol: float = 1e-6
    max_iter: int = 200

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise DomainError("optimizer tolerance must be positive")


@lru_cache(maxsize=64)
def _legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def _panel_rule(edges: np.ndarray, order: int):
    t, w = _legendre(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = (b - a) / 2.0
    nodes = (a + half * (t + 1.0)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def graded_breakpoints(location: float, width: float, upper: float) -> np.ndarray:
    """Offsets ``location`` and ``location +- width * 2**k`` inside ``(0, upper)``.

    Panels bounded by these points shrink geometrically towards ``location``,
    which resolves a feature of size ``width`` there at fixed order.
    """
    if not width > 0 or not upper > 0:
        return np.empty(0)
    # features narrower than 2**-64 of the range cannot be resolved in double precision
    width = max(width, upper * 2.0**-64)
    k = np.arange(int(math.ceil(math.log2(max(upper / width, 2.0)))) + 1)
    steps = width * np.exp2(k)
    steps = steps[steps < upper]
    pts = np.concatenate(([location], location + steps, location - steps))
    return pts[(pts > 0) & (pts < upper)]


def paired_nodes(
    scale: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    breakpoints: Iterable[float] = (),
    limit: float | None = None,
):
    """Positive offsets ``x`` and weights ``w`` such that

    ``integral f(center + y) dy  ~=  sum(w * (f(center + x) + f(center - x)))``.

    With the tan substitution the offsets extend to infinity (``limit=None``) or
    to a symmetric cutoff ``limit``; the linear transform requires ``limit`` and
    integrates ``[-limit, limit]``.  ``breakpoints`` are offsets (energy units)
    that become extra panel edges.
    """
    if not scale > 0:
        raise DomainError(f"transform scale must be positive, got {scale}")
    bps = np.asarray(list(breakpoints), dtype=float)
    if spec.transform == "linear":
        if limit is None:
            raise DomainError("linear transform needs a finite limit")
        edges = np.linspace(0.0, limit, spec.panels + 1)
        bps = bps[(bps > 0) & (bps < limit)]
        edges = np.unique(np.concatenate((edges, bps)))
        nodes, weights = _panel_rule(edges, spec.order)
        return nodes, weights

    theta_max = math.pi / 2.0 if limit is None else math.atan(limit / scale)
    edges = np.linspace(0.0, theta_max, spec.panels + 1)
    if bps.size:
        th = np.arctan(bps[bps > 0] / scale)
        edges = np.unique(np.concatenate((edges, th[th < theta_max])))
    theta, wt = _panel_rule(edges, spec.order)
    cos = np.cos(theta)
    return scale * np.tan(theta), wt * scale / (cos * cos)


def integrate_transformed(
    f: Callable[[np.ndarray], np.ndarray],
    center: float,
    scale: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    breakpoints: Iterable[float] = (),
    limit: float | None = None,
) -> float:
    """Integrate a vectorised ``f`` over the real line around ``center``.

    Values at mirrored nodes are summed first, so odd integrands cancel
    exactly and ``1/x`` tails give their symmetric principal value.
    """
    x, w = paired_nodes(scale, spec, breakpoints, limit)
    plus = np.asarray(f(center + x))
    minus = np.asarray(f(center - x))
    paired = plus + minus
    bad = ~np.isfinite(paired)
    if np.any(bad):
        i = int(np.argmax(bad))
        node = center + x[i] if not np.isfinite(plus[i]) else center - x[i]
        raise NumericError("non-finite integrand", node=float(node))
    return float(np.sum(w * paired))


def golden_section(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
    max_iter: int = 200,
):
    """Maximise a unimodal ``g`` on ``[lo, hi]``.

    Returns ``(x, g(x), iterations)`` where ``x`` is the midpoint of the final
    bracket, whose width is at most ``tol``.
    """
    a, b = float(lo), float(hi)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, g(x), 0
    needed = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    if needed > max_iter:
        raise ConvergenceError(
            "golden-section search needs more iterations than allowed",
            needed=needed,
            max_iter=max_iter,
        )
    c = b - INV_PHI * h
    d = a + INV_PHI * h
    gc, gd = g(c), g(d)
    it = 0
    while b - a > tol:
        it += 1
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
        if it > max_iter:
            raise ConvergenceError("golden-section search did not converge", bracket=(a, b))
    x = 0.5 * (a + b)
    return x, g(x), it


def maximize_scalar(
    g: Callable[[float], float],
    spec: OptimizerSpec = OptimizerSpec(),
    starts: int = 1,
):
    """Golden-section maximisation, optionally restarted on ``starts`` sub-brackets.

    Unimodality is assumed inside each sub-bracket; the best local result wins.
    Returns ``(argmax, max_value)``.
    """
    if starts < 1:
        raise DomainError("starts must be >= 1")
    edges = np.linspace(spec.lo, spec.hi, starts + 1)
    best = None
    for a, b in zip(edges[:-1], edges[1:]):
        x, v, _ = golden_section(g, a, b, spec.tol, spec.max_iter)
        if best is None or v > best[1]:
            best = (x, v)
    return best


def scan_then_refine(
    g: Callable[[float], float],
    grid: Sequence[float],
    tol: float = 1e-6,
    max_iter: int = 200,
):
    """Locate the best point of ``g`` on ``grid``, then golden-section refine
    between its neighbours.  Robust when the optimum may sit near a bracket end
    that spans decades.  Returns ``(argmax, max_value)``."""
    grid = np.asarray(grid, dtype=float)
    values = np.array([g(x) for x in grid])
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    x, v, _ = golden_section(g, lo, hi, tol, max_iter)
    if values[i] > v:
        return float(grid[i]), float(values[i])
    return x, v


def seeded_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    """Independent, reproducible generator for ``(master_seed, stream_id)``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.PCG64(ss))
