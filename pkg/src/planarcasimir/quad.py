"""Adaptive Gauss-Kronrod quadrature on half-lines and on the (xi, q) quadrant.

Semi-infinite ranges are mapped onto [0, 1) with ``u = t / (t + s)`` where
``s`` is a characteristic scale of the integrand's decay; ``t = 0`` lands at
``u = 0`` where floating-point panels can be made arbitrarily narrow, so
integrable endpoint singularities are resolved.  Panels are refined
by bisection with the 10/21-point Gauss-Kronrod pair; the error estimate is
the QUADPACK one, floored at the round-off level of the panel.

Double integrals are evaluated as nested one-dimensional integrals.  All inner
integrals belonging to one outer panel are refined together as a batch so that
the integrand sees large vectorised calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Literal, NamedTuple

import numpy as np

from .constants import C

# QUADPACK qk21 abscissae and weights, positive half (last entry is the centre).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.0,
    0.066671344308688137593568809893332,
    0.0,
    0.149451349150580593145776339657697,
    0.0,
    0.219086362515982043995534934228163,
    0.0,
    0.269266719309996355091226921569469,
    0.0,
    0.295524224714752870173892994651338,
    0.0,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
# panels narrower than this (relative to their position) are not split
_MIN_REL_WIDTH = 64 * _EPS
_MIN_ABS_WIDTH = 1e-300
# values this small are indistinguishable from underflow noise
_UNDERFLOW = 1e-290


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and scales for the (xi, q) integrals.

    ``xi_scale`` (rad/s) and ``q_scale`` (rad/m) override the automatic choice
    ``c/(2L)`` and ``1/(2L)`` made by the physics routines from their decay
    length ``L``.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_evals: int = 10_000_000
    xi_scale: float | None = None
    q_scale: float | None = None
    strategy: Literal["adaptive_nested", "fixed_panel"] = "adaptive_nested"
    coordinates: Literal["kappa", "q"] = "kappa"
    fixed_panels: int = 64

    def __post_init__(self):
        if not (self.rel_tol >= 0 and self.abs_tol >= 0):
            raise ValueError("rel_tol and abs_tol must be non-negative")
        if self.rel_tol == 0 and self.abs_tol == 0:
            raise ValueError("at least one of rel_tol, abs_tol must be positive")
        if self.max_evals < 1000:
            raise ValueError("max_evals must be >= 1000")
        if self.strategy not in ("adaptive_nested", "fixed_panel"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.coordinates not in ("kappa", "q"):
            raise ValueError(f"unknown coordinates {self.coordinates!r}")
        for name in ("xi_scale", "q_scale"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive")
        if self.fixed_panels < 1:
            raise ValueError("fixed_panels must be >= 1")

    def with_(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)

    def scales(self, length: float) -> tuple[float, float]:
        """(xi_scale, q_scale) for an integrand decaying like exp(-2 kappa length)."""
        xi_s = self.xi_scale if self.xi_scale is not None else C / (2.0 * length)
        q_s = self.q_scale if self.q_scale is not None else 1.0 / (2.0 * length)
        return xi_s, q_s


class QuadResult(NamedTuple):
    value: float
    error: float
    evals: int
    converged: bool


class _Budget:
    def __init__(self, max_evals: int):
        self.max_evals = max_evals
        self.used = 0
        self.exhausted = False

    def take(self, n: int) -> bool:
        if self.used + n > self.max_evals:
            self.exhausted = True
            return False
        self.used += n
        return True


def _rule(func, rows, a, b):
    """Apply GK21 to panels [a, b] of the given rows.

    ``func(rows, x)`` gets flattened arrays and returns ``(values, extra)``
    where ``extra`` is an absolute error already carried by each value (the
    inner-integral error in nested use), or ``None``.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    r = np.repeat(rows, NODES.size)
    fv, extra = func(r, x.ravel())
    fv = np.asarray(fv, dtype=float).reshape(x.shape)
    k = half * (fv @ KRONROD_WEIGHTS)
    g = half * (fv @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fv) @ KRONROD_WEIGHTS)
    mean = fv @ KRONROD_WEIGHTS * 0.5
    resasc = np.abs(half) * (np.abs(fv - mean[:, None]) @ KRONROD_WEIGHTS)
    err = np.abs(k - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where(resasc > 0, scaled, err)
    floor = 50.0 * _EPS * resabs
    # a panel whose error is pure round-off gains nothing from bisection
    stuck = err <= floor
    err = np.maximum(err, floor)
    if extra is not None:
        extra = np.asarray(extra, dtype=float).reshape(x.shape)
        err = err + np.abs(half) * (np.abs(extra) @ KRONROD_WEIGHTS)
    return k, err, stuck


def _batch_adaptive(func, n_rows, a, b, rel_tol, abs_tol, budget,
                    fixed_panels=None, init_panels=4):
    """Refine ``n_rows`` independent integrals over [a, b] simultaneously.

    Returns (values, errors, converged) arrays of length ``n_rows``.
    """
    n0 = fixed_panels or init_panels
    edges = np.linspace(a, b, n0 + 1)
    rows = np.repeat(np.arange(n_rows), n0)
    pa = np.tile(edges[:-1], n_rows)
    pb = np.tile(edges[1:], n_rows)

    values = np.zeros(n_rows)
    errors = np.full(n_rows, np.inf)
    done = np.zeros(n_rows, dtype=bool)
    converged = np.zeros(n_rows, dtype=bool)

    if not budget.take(rows.size * NODES.size):
        return values, errors, converged
    pv, pe, ps = _rule(func, rows, pa, pb)

    while True:
        values = np.bincount(rows, weights=pv, minlength=n_rows)
        errors = np.bincount(rows, weights=pe, minlength=n_rows)
        tol = np.maximum(max(abs_tol, _UNDERFLOW), rel_tol * np.abs(values))
        finite = np.isfinite(values) & np.isfinite(errors)
        newly = ~done & finite & (errors <= tol)
        converged |= newly
        done |= newly | ~finite
        if done.all() or fixed_panels:
            break

        counts = np.bincount(rows, minlength=n_rows)
        share = tol[rows] / counts[rows]
        pmax = np.zeros(n_rows)
        np.maximum.at(pmax, rows, pe)
        open_row = ~done[rows]
        width_floor = np.maximum(_MIN_REL_WIDTH * np.maximum(np.abs(pa), np.abs(pb)),
                                 _MIN_ABS_WIDTH)
        wide = ((pb - pa) > width_floor) & ~ps
        split = open_row & wide & ((pe > share) | (pe >= pmax[rows]))
        # rows that cannot be refined further are finished, unconverged
        can = np.bincount(rows, weights=split, minlength=n_rows) > 0
        done |= ~can
        split &= ~done[rows]
        if not split.any():
            break
        if not budget.take(2 * int(split.sum()) * NODES.size):
            break

        sa, sb = pa[split], pb[split]
        sr = rows[split]
        sm = 0.5 * (sa + sb)
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        nr = np.concatenate([sr, sr])
        nv, ne, ns = _rule(func, nr, na, nb)
        keep = ~split
        rows = np.concatenate([rows[keep], nr])
        pa = np.concatenate([pa[keep], na])
        pb = np.concatenate([pb[keep], nb])
        pv = np.concatenate([pv[keep], nv])
        pe = np.concatenate([pe[keep], ne])
        ps = np.concatenate([ps[keep], ns])

    return values, errors, converged


def _halfline_map(f, scale):
    """Wrap f(t) on [0, inf) as a function of u in [0, 1)."""
    def g(u):
        v = 1.0 - u
        t = scale * u / v
        with np.errstate(over="ignore"):
            return np.asarray(f(t), dtype=float) * (scale / (v * v))
    return g


def integrate_halfline(f: Callable, scale: float = 1.0,
                       spec: QuadratureSpec | None = None) -> QuadResult:
    """Integrate a vectorised ``f`` over [0, inf).

    ``scale`` is the length over which ``f`` decays; it only affects the
    efficiency of the mapping, not the result.
    """
    spec = spec or QuadratureSpec()
    if not scale > 0:
        raise ValueError("scale must be positive")
    budget = _Budget(spec.max_evals)
    g = _halfline_map(f, scale)
    fixed = spec.fixed_panels if spec.strategy == "fixed_panel" else None
    v, e, ok = _batch_adaptive(lambda r, u: (g(u), None), 1, 0.0, 1.0,
                               spec.rel_tol, spec.abs_tol, budget, fixed)
    return QuadResult(float(v[0]), float(e[0]), budget.used,
                      bool(ok[0]) and not budget.exhausted)


def integrate_interval(f: Callable, a: float, b: float,
                       spec: QuadratureSpec | None = None) -> QuadResult:
    """Integrate a vectorised ``f`` over the finite interval [a, b]."""
    spec = spec or QuadratureSpec()
    if not b > a:
        raise ValueError("need b > a")
    budget = _Budget(spec.max_evals)
    fixed = spec.fixed_panels if spec.strategy == "fixed_panel" else None
    v, e, ok = _batch_adaptive(lambda r, x: (f(x), None), 1, a, b,
                               spec.rel_tol, spec.abs_tol, budget, fixed)
    return QuadResult(float(v[0]), float(e[0]), budget.used,
                      bool(ok[0]) and not budget.exhausted)


def integrate_quadrant(f: Callable, xi_scale: float, q_scale: float,
                       spec: QuadratureSpec | None = None,
                       coordinates: Literal["kappa", "q"] | None = None
                       ) -> QuadResult:
    """Integrate ``f(xi, q)`` over xi >= 0, q >= 0.

    The outer integral runs over xi, the inner over q.  With
    ``coordinates="kappa"`` the inner variable is ``kappa - xi/c`` where
    ``kappa = sqrt(xi**2/c**2 + q**2)``, using ``q dq = kappa dkappa``; the
    integrand is still supplied as a function of (xi, q).  This assumes the
    form ``f = q * g(xi, q**2)`` shared by all the physics integrands (the
    measure factor cancels the Jacobian ``kappa / q``); for anything else use
    ``coordinates="q"``.  Inner integrals
    are solved to a tenth of the outer relative tolerance and their error
    estimates are propagated into the outer one.
    """
    spec = spec or QuadratureSpec()
    coordinates = coordinates or spec.coordinates
    budget = _Budget(spec.max_evals)
    fixed = spec.fixed_panels if spec.strategy == "fixed_panel" else None
    inner_ok = [True]

    def inner_integrand(xi_nodes):
        def h(rows, u):
            xi = xi_nodes[rows]
            v = 1.0 - u
            t = q_scale * u / v
            jac = q_scale / (v * v)
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                if coordinates == "q":
                    val = f(xi, t) * jac
                else:
                    k0 = xi / C
                    q = np.sqrt(t * (t + 2.0 * k0))
                    val = np.where(q > 0, f(xi, q) * (t + k0) / q, 0.0) * jac
            return val, None
        return h

    def outer(rows, u):
        v = 1.0 - u
        xi = xi_scale * u / v
        jac = xi_scale / (v * v)
        vals, errs, ok = _batch_adaptive(
            inner_integrand(xi), xi.size, 0.0, 1.0, spec.rel_tol / 10.0, 0.0,
            budget, fixed)
        if not ok.all():
            inner_ok[0] = False
        with np.errstate(over="ignore", invalid="ignore"):
            return vals * jac, errs * jac

    v, e, ok = _batch_adaptive(outer, 1, 0.0, 1.0, spec.rel_tol, spec.abs_tol,
                               budget, fixed)
    converged = bool(ok[0]) and inner_ok[0] and not budget.exhausted
    return QuadResult(float(v[0]), float(e[0]), budget.used, converged)


__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "integrate_halfline",
    "integrate_interval",
    "integrate_quadrant",
]
