"""Independent reference computations (scipy quadrature, brute-force sums).

Nothing here imports the package's quadrature or optimiser code.
"""

import math

import numpy as np
from scipy.integrate import quad


def lorentz_amp(E, c, g):
    return math.sqrt(g / (2 * math.pi)) / ((E - c) + 0.5j * g)


def pieces(center, scale):
    cuts = [0.0, scale, 10 * scale, 100 * scale, 1e4 * scale]
    return [(center + a, center + b) for a, b in zip(cuts[:-1], cuts[1:])] + [(center + cuts[-1], np.inf)]


def quad_line(f, center=0.0, scale=1.0):
    """Integral of f over the real line as the symmetric limit about ``center``."""
    total = 0.0
    for a, b in pieces(0.0, scale):
        total += quad(lambda y: f(center + y) + f(center - y), a, b, limit=400, epsabs=1e-15, epsrel=1e-13)[0]
    return total


def overlap_quad(de, g=1.0):
    f = lambda E: np.conj(lorentz_amp(E, -de / 2, g)) * lorentz_amp(E, de / 2, g)
    scale = max(g, de)
    return complex(quad_line(lambda E: f(E).real, 0.0, scale), quad_line(lambda E: f(E).imag, 0.0, scale))


def postselected_quad(de, delta, g=1.0):
    """(P, principal-value mean shift) by direct quadrature."""
    def a2(E):
        A = 0.5 * ((1 - delta) * lorentz_amp(E, -de / 2, g) - (1 + delta) * lorentz_amp(E, de / 2, g))
        return abs(A) ** 2

    scale = max(g, de)
    P = quad_line(a2, 0.0, scale)
    first = 0.0
    for a, b in pieces(0.0, scale):
        first += quad(lambda y: y * (a2(y) - a2(-y)), a, b, limit=400, epsabs=1e-15, epsrel=1e-13)[0]
    return P, first / P


def ar1_brute(n, rho, sigma):
    k = np.arange(1, n)
    return sigma**2 / n * (1 + 2.0 / n * np.sum((n - k) * rho**k))


def dense_argmax(g, lo, hi, n=20001):
    x = np.linspace(lo, hi, n)
    v = np.array([g(t) for t in x])
    i = int(np.argmax(v))
    return x[i], v[i]


def shift_exact(x, d, g=1.0):
    """delta*x/(2P) with P from 1/4[(1-d)^2+(1+d)^2-2(1-d^2)g^2/(g^2+x^2)]."""
    P = 0.25 * ((1 - d) ** 2 + (1 + d) ** 2 - 2 * (1 - d * d) * g * g / (g * g + x * x))
    return d * x / (2 * P), P


def dephased_quad(de, d, gn, mixing="paper_literal", g=1.0):
    pdf = lambda e: (gn / (2 * math.pi)) / (e * e + 0.25 * gn * gn)
    scale = max(g, gn, de)
    if mixing == "paper_literal":
        return quad_line(lambda e: pdf(e) * shift_exact(de + e, d, g)[0], 0.0, scale)
    num = quad_line(lambda e: pdf(e) * 0.5 * d * (de + e), 0.0, scale)
    den = quad_line(lambda e: pdf(e) * shift_exact(de + e, d, g)[1], 0.0, scale)
    return num / den
