"""
Intégrales de référence calculées par l'oracle de quadrature
"""

import math

from nwbound.services.oracle import integrate_1d


def _peaks(h, L, lower, upper):
    return [p for p in (-h * h * L, 0.0, h * h * L) if lower < p < upper]


def _gauss(h):
    return 1.0 / math.sqrt(2.0 * math.pi * h * h)


def psi_by_quadrature(L, h, lower, upper):
    """2·∫ e^{−l²/(2h²) − lL}/√(2πh²) dl"""
    c = _gauss(h)
    f = lambda l: c * math.exp(-l * l / (2 * h * h) - l * L)
    return 2.0 * integrate_1d(f, lower, upper, breakpoints=_peaks(h, L, lower, upper), scale=h).value


def zeta_by_quadrature(h, lower, upper, L):
    """2·∫ e^{−l²/(2h²) + |l|L}/√(2πh²) dl"""
    c = _gauss(h)
    f = lambda l: c * math.exp(-l * l / (2 * h * h) + abs(l) * L)
    return 2.0 * integrate_1d(f, lower, upper, breakpoints=_peaks(h, L, lower, upper), scale=h).value


def signed_moment_by_quadrature(L_m, L_f, h, lower, upper):
    c = _gauss(h)
    f = lambda l: c * math.exp(-l * l / (2 * h * h) - l * L_f) * l * L_m
    return integrate_1d(f, lower, upper, breakpoints=_peaks(h, L_f, lower, upper), scale=h).value


def abs_moment_by_quadrature(L_m, L_f, h, lower, upper):
    c = _gauss(h)
    f = lambda l: c * math.exp(-l * l / (2 * h * h) + abs(l) * L_f) * abs(l) * L_m
    return integrate_1d(f, lower, upper, breakpoints=_peaks(h, L_f, lower, upper), scale=h).value


def matches(actual, expected, rel=1e-8, abs_=1e-12) -> bool:
    return abs(actual - expected) <= max(rel * abs(expected), abs_)


def assert_matches(actual, expected, rel=1e-8, abs_=1e-12):
    assert matches(actual, expected, rel, abs_), f"{actual!r} ≠ {expected!r}"
