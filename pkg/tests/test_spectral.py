import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import lorentz_amp, overlap_quad
from wva_probe.errors import DomainError
from wva_probe.numerics import integrate_transformed
from wva_probe.spectral import (
    EnergyGrid,
    SpectralParams,
    branch_overlap,
    lineshape_amplitude,
    lineshape_firstorder,
)

INV = math.sqrt(1 / (2 * math.pi))


def test_on_resonance_value():
    v = complex(lineshape_amplitude(0.0, 0.0, 1.0))
    assert v == pytest.approx(-2j * INV, abs=1e-15)
    assert v.imag == pytest.approx(-0.7979, abs=1e-4)


def test_matches_independent_formula():
    E = np.linspace(-3, 3, 13)
    ref = np.array([lorentz_amp(e, 0.4, 2.0) for e in E])
    assert np.allclose(lineshape_amplitude(E, 0.4, 2.0), ref, rtol=1e-15, atol=0)


@given(st.floats(-5, 5), st.floats(0.1, 10))
def test_normalisation(center, gamma):
    f = lambda E: np.abs(lineshape_amplitude(E, center, gamma)) ** 2
    assert integrate_transformed(f, center, gamma / 2) == pytest.approx(1.0, abs=1e-8)


def test_half_maximum_at_half_width():
    g = 1.3
    peak = abs(complex(lineshape_amplitude(2.0, 2.0, g))) ** 2
    half = abs(complex(lineshape_amplitude(2.0 + g / 2, 2.0, g))) ** 2
    assert half == pytest.approx(peak / 2, rel=1e-14)


def test_intensity_mirror_symmetry():
    x = np.arange(0, 57) / 8.0  # dyadic offsets keep 1.5 +- x exact
    a = np.abs(lineshape_amplitude(1.5 + x, 1.5, 0.7)) ** 2
    b = np.abs(lineshape_amplitude(1.5 - x, 1.5, 0.7)) ** 2
    assert np.array_equal(a, b)


@pytest.mark.parametrize("gamma", [0.0, -1.0])
def test_gamma_must_be_positive(gamma):
    with pytest.raises(DomainError):
        lineshape_amplitude(0.0, 0.0, gamma)


@pytest.mark.parametrize("kwargs", [dict(gamma=0), dict(delta_e=-0.1), dict(e0=math.inf), dict(gamma=math.nan)])
def test_params_validation(kwargs):
    with pytest.raises(DomainError):
        SpectralParams(**kwargs)


def test_firstorder_degenerate_splitting():
    p = SpectralParams(0.3, 0.0, 1.0)
    E = np.linspace(-4, 4, 9)
    for s in (1, -1):
        assert np.array_equal(lineshape_firstorder(E, p, s), lineshape_amplitude(E, 0.3, 1.0))


def test_firstorder_worked_value():
    p = SpectralParams(0.0, 0.2, 1.0)
    v = complex(lineshape_firstorder(0.0, p, +1))
    assert v == pytest.approx(complex(lineshape_amplitude(0.0, 0.0, 1.0)) - 0.4 * INV, abs=1e-15)
    with pytest.raises(DomainError):
        lineshape_firstorder(0.0, p, 0)


def _firstorder_error(de):
    p = SpectralParams(0.0, de, 1.0)
    E = np.linspace(-5, 5, 2001)
    err = 0.0
    for s, c in ((1, p.center_v), (-1, p.center_h)):
        err = max(err, np.max(np.abs(lineshape_firstorder(E, p, s) - lineshape_amplitude(E, c, 1.0))))
    return err, E


def test_firstorder_error_is_second_order():
    p = SpectralParams(0.0, 0.01, 1.0)
    E = np.linspace(-5, 5, 2001)
    for s, c in ((1, p.center_v), (-1, p.center_h)):
        diff = np.abs(lineshape_firstorder(E, p, s) - lineshape_amplitude(E, c, 1.0))
        assert np.all(diff <= 2 * 0.01**2 * np.abs(lineshape_amplitude(E, 0.0, 1.0)))
    e1, _ = _firstorder_error(0.01)
    e2, _ = _firstorder_error(0.02)
    assert 3.5 <= e2 / e1 <= 4.5


@pytest.mark.parametrize("de", [0.0, 0.01, 0.1, 1.0, 3.0])
def test_overlap_closed_form_matches_scipy(de):
    p = SpectralParams(0.0, de, 1.0)
    ref = overlap_quad(de)
    assert abs(branch_overlap(p) - ref) < 1e-8
    assert abs(branch_overlap(p, "quadrature") - ref) < 1e-8


def test_overlap_worked_values():
    assert branch_overlap(SpectralParams(delta_e=0.0)) == 1 + 0j
    assert branch_overlap(SpectralParams(delta_e=1.0)) == pytest.approx(0.5 - 0.5j, abs=1e-15)
    assert abs(branch_overlap(SpectralParams(delta_e=3.0))) ** 2 == pytest.approx(0.1, rel=1e-14)
    # independent of e0 and scale-free in delta_e / gamma
    assert branch_overlap(SpectralParams(5.0, 0.4, 2.0), "quadrature") == pytest.approx(1 / (1 + 0.2j), abs=1e-9)


def test_overlap_magnitude_decreasing():
    mags = [abs(branch_overlap(SpectralParams(delta_e=x))) for x in np.linspace(0, 5, 51)]
    assert np.all(np.diff(mags) < 0)
    with pytest.raises(DomainError):
        branch_overlap(SpectralParams(), method="bogus")


def test_energy_grid_linear():
    g = EnergyGrid(1.0, 2.0, 5)
    assert np.allclose(g.nodes, [-1, 0, 1, 2, 3])
    assert g.weights.sum() == pytest.approx(4.0)
    assert np.allclose(g.nodes - 1.0, -(g.nodes - 1.0)[::-1], atol=0)


def test_energy_grid_tan_integrates_lorentzian():
    g = EnergyGrid(0.2, 0.5, 801, "tan")
    dens = np.abs(lineshape_amplitude(g.nodes, 0.2, 1.0)) ** 2
    assert np.sum(g.weights * dens) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("kwargs", [dict(n_points=4), dict(n_points=0), dict(half_width=0), dict(mapping="log")])
def test_energy_grid_validation(kwargs):
    with pytest.raises(DomainError):
        EnergyGrid(**kwargs)
