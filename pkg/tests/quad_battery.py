"""Known-value integrals for checking quadrature error estimates.

Reference values come from closed forms evaluated with mpmath at 30 digits.
"""

import math

import mpmath as mp
import numpy as np

from planarcasimir.quad import (
    QuadratureSpec,
    integrate_halfline,
    integrate_interval,
    integrate_quadrant,
)

mp.mp.dps = 30
TOLERANCES = (1e-4, 1e-6, 1e-8, 1e-10, 1e-12)


def _f(x):
    return float(x)


HALFLINE = [
    ("exp", lambda x: np.exp(-x), 1.0, 1.0),
    ("x2exp", lambda x: x * x * np.exp(-x), 1.0, 2.0),
    ("h_unscreened", lambda x: (x * x + 2 * x + 2) * np.exp(-x), 1.0, 6.0),
    ("x5exp", lambda x: x**5 * np.exp(-x), 1.0, 120.0),
    ("planck3", lambda x: x**3 / np.expm1(x), 1.0, _f(mp.pi**4 / 15)),
    ("planck1", lambda x: x / np.expm1(x), 1.0, _f(mp.pi**2 / 6)),
    ("gauss", lambda x: np.exp(-x * x), 1.0, _f(mp.sqrt(mp.pi) / 2)),
    ("lorentzian", lambda x: 1.0 / (1.0 + x * x), 1.0, _f(mp.pi / 2)),
    ("damped_cos", lambda x: np.cos(x) * np.exp(-x), 1.0, 0.5),
    ("sqrt_exp", lambda x: np.sqrt(x) * np.exp(-x), 1.0, _f(mp.sqrt(mp.pi) / 2)),
    ("inv_sqrt_exp", lambda x: np.exp(-x) / np.sqrt(x), 1.0, _f(mp.sqrt(mp.pi))),
    ("log_exp", lambda x: np.log(x) * np.exp(-x), 1.0, _f(-mp.euler)),
    ("scaled_exp", lambda x: np.exp(-x / 7e-8), 1e-7, 7e-8),
    ("slow_exp", lambda x: np.exp(-2e6 * x) * x, 1e-6, 1.0 / 4e12),
    ("bose_q", lambda x: x**3 * np.exp(-2 * x) / (1 - np.exp(-2 * x)), 0.5,
     _f(6 * mp.zeta(4) / 16)),
]

INTERVAL = [
    ("sqrt", lambda x: np.sqrt(x), 0.0, 1.0, 2.0 / 3.0),
    ("poly", lambda x: x**7 - 3 * x, -1.0, 2.0, 2.0**8 / 8 - 1 / 8 - 1.5 * 3),
    ("sin", np.sin, 0.0, math.pi, 2.0),
    ("runge", lambda x: 1.0 / (1 + 25 * x * x), -1.0, 1.0, _f(2 * mp.atan(5) / 5)),
    ("log", np.log, 0.0, 1.0, -1.0),
    ("peak", lambda x: 1.0 / ((x - 0.3) ** 2 + 1e-4), 0.0, 1.0,
     _f((mp.atan(70) + mp.atan(30)) * 100)),
]


def _kappa_moment(d):
    # int dxi int dq q exp(-2 kappa d) = c / (4 d^3)
    from planarcasimir.constants import C
    return (lambda xi, q: q * np.exp(-2.0 * np.sqrt(xi * xi / C**2 + q * q) * d),
            C / (2 * d), 1 / (2 * d), C / (4 * d**3))


# general integrands: (xi, q) coordinates only
QUADRANT_Q = [
    ("separable", lambda x, y: np.exp(-x / 3.0 - y / 0.5), 3.0, 0.5, 1.5),
    ("gauss2", lambda x, y: np.exp(-x * x - y * y), 1.0, 1.0, _f(mp.pi / 4)),
]
# q * g(xi, q^2) integrands: valid in both coordinate systems
QUADRANT = [
    ("separable_measure", lambda x, y: y * np.exp(-x / 3.0 - 4 * y * y), 3.0, 0.5, 0.375),
    ("gauss2_measure", lambda x, y: y * np.exp(-x * x - y * y), 1.0, 1.0,
     _f(mp.sqrt(mp.pi) / 4)),
    ("kappa_moment_1um", *_kappa_moment(1e-6)),
    ("kappa_moment_10nm", *_kappa_moment(1e-8)),
]


def run_battery():
    """Yield (name, tol, value, error_estimate, exact) over the whole battery."""
    for tol in TOLERANCES:
        spec = QuadratureSpec(rel_tol=tol)
        for name, f, scale, exact in HALFLINE:
            r = integrate_halfline(f, scale, spec)
            yield name, tol, r.value, r.error, exact
        for name, f, a, b, exact in INTERVAL:
            r = integrate_interval(f, a, b, spec)
            yield name, tol, r.value, r.error, exact
        if tol < 1e-11:
            continue  # nested 2D at 1e-12 is slow and adds nothing new
        for name, f, s, t, exact in QUADRANT_Q:
            r = integrate_quadrant(f, s, t, spec, coordinates="q")
            yield f"{name}/q", tol, r.value, r.error, exact
        for name, f, s, t, exact in QUADRANT:
            for coords in ("q", "kappa"):
                r = integrate_quadrant(f, s, t, spec, coordinates=coords)
                yield f"{name}/{coords}", tol, r.value, r.error, exact


def honest(value, error, exact):
    return abs(value - exact) <= 10.0 * error
