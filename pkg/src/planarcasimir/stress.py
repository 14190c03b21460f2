"""Casimir stress inside a planar layer and forces on plates.

Sign conventions: forces are reported along +z (increasing layer index), so
attraction towards a wall at smaller z is negative.  ``stress_zz`` returns
the zz component of the stress tensor as defined by the layer formula
(positive between two attracting mirrors); the force on a layer is the
stress just outside its right face minus the stress just outside its left
face.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR
from .layers import (
    Layer,
    LayerStack,
    _decay,
    kappa,
    reflect_slab,
    reflection_pair,
)
from .materials import VACUUM, PerfectMirror, mu_at, susceptibility_of
from .quad import QuadratureSpec, integrate_quadrant

PREFACTOR = HBAR / (8.0 * math.pi**2)
# relative offset used to approach a layer face from inside the neighbour
BOUNDARY_OFFSET = 1e-9


@dataclass(frozen=True)
class ForceResult:
    value: float
    abs_error: float
    evaluations: int
    converged: bool

    def __sub__(self, other: "ForceResult") -> "ForceResult":
        return ForceResult(self.value - other.value, self.abs_error + other.abs_error,
                           self.evaluations + other.evaluations,
                           self.converged and other.converged)


@dataclass(frozen=True)
class StressContext:
    """Position ``z`` in the local coordinate of layer ``j``.

    Interior layers use 0 < z < d_j.  The first (semi-infinite) layer uses
    z < 0 with its right face at 0; the last layer uses z > 0 with its left
    face at 0.
    """

    stack: LayerStack
    j: int
    z: float

    def __post_init__(self):
        j = self.stack.check_index(self.j)
        layer = self.stack[j]
        if isinstance(layer.material, PerfectMirror):
            raise ValueError("no stress inside a perfect mirror")
        if j == 0:
            ok = self.z < 0
        elif j == len(self.stack) - 1:
            ok = self.z > 0
        else:
            ok = 0 < self.z < layer.thickness
        if not ok:
            raise ValueError(f"z = {self.z} is not inside layer {j}")

    @property
    def layer(self) -> Layer:
        return self.stack[self.j]

    def distances(self) -> tuple[float, float]:
        """Distances to the left and right faces (inf when absent)."""
        if self.j == 0:
            return math.inf, -self.z
        if self.j == len(self.stack) - 1:
            return self.z, math.inf
        return self.z, self.layer.thickness - self.z

    def material_distances(self) -> tuple[float, float]:
        """Distances to the nearest actual change of material on each side.

        Faces between layers of identical material reflect nothing, so the
        reflection coefficients already carry the propagation across them.
        """
        st, j = self.stack, self.j
        m = self.layer.material
        dl, dr = self.distances()
        k = j - 1
        while k >= 0 and st[k].material == m:
            dl += st[k].thickness
            k -= 1
        k = j + 1
        while k < len(st) and st[k].material == m:
            dr += st[k].thickness
            k += 1
        return dl, dr

    def decay_length(self) -> float:
        """Shortest length L setting the exp(-2 kappa L) decay of the integrand."""
        st, j = self.stack, self.j
        left_zero = st.uniform_beyond(j, "-")
        right_zero = st.uniform_beyond(j, "+")
        dl, dr = self.material_distances()
        lengths = []
        if not (left_zero or right_zero):
            lengths.append(dl + dr)  # round trip
        if not self.layer.material.is_vacuum:
            if not left_zero:
                lengths.append(dl)
            if not right_zero:
                lengths.append(dr)
        lengths = [x for x in lengths if math.isfinite(x)]
        if lengths:
            return min(lengths)
        # the integrand vanishes identically; any finite scale will do
        finite = [x for x in (dl, dr) if math.isfinite(x)]
        return max(finite) if finite else 1.0


def g_integrand(ctx: StressContext, xi, q):
    """Layer stress kernel g_j(z, i xi, q) in 1/m^2 (real)."""
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    layer = ctx.layer
    m = layer.material
    kj = kappa(m, xi, q)
    chi_e = m.epsilon(xi)
    chi_m = m.mu(xi)
    n2 = (1.0 + chi_e) * (1.0 + chi_m)
    n2m1 = chi_e + chi_m + chi_e * chi_m
    inv = 1.0 / n2
    plus = reflection_pair(ctx.stack, ctx.j, "+", xi, q)
    minus = reflection_pair(ctx.stack, ctx.j, "-", xi, q)
    e_round = _decay(kj, layer.thickness)
    dl, dr = ctx.distances()
    el, er = _decay(kj, dl), _decay(kj, dr)

    k2 = kj * kj
    q2 = q * q
    one_m = n2m1 * inv  # 1 - n^-2 without cancellation
    a_s = -k2 * (1.0 + inv) - q2 * one_m
    a_p = -k2 * (1.0 + inv) + q2 * one_m
    b = -(xi * xi / C**2) * n2m1

    with np.errstate(invalid="ignore"):
        xs = plus.rs * minus.rs * e_round
        xp = plus.rp * minus.rp * e_round
        ds = 1.0 - xs
        dp = 1.0 - xp
        g = (2.0 * a_s * xs / ds + 2.0 * a_p * xp / dp
             - b * (minus.rs * el + plus.rs * er) / ds
             + b * (minus.rp * el + plus.rp * er) / dp)
    g = np.where((xi == 0) & (q == 0), 0.0, g)
    return float(g) if g.ndim == 0 else g


def _integrate(integrand, length, quad: QuadratureSpec | None) -> ForceResult:
    quad = quad or QuadratureSpec()
    xi_s, q_s = quad.scales(length)

    def f(xi, q):
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            v = integrand(xi, q)
        return np.where((xi == 0) & (q == 0), 0.0, v)

    r = integrate_quadrant(f, xi_s, q_s, quad)
    return ForceResult(r.value, r.error, r.evals, r.converged)


def stress_zz(ctx: StressContext, quad: QuadratureSpec | None = None) -> ForceResult:
    """T_zz (Pa) at the point described by ``ctx``."""
    m = ctx.layer.material

    def integrand(xi, q):
        kj = kappa(m, xi, q)
        return -PREFACTOR * q * mu_at(m, xi) * g_integrand(ctx, xi, q) / kj

    return _integrate(integrand, ctx.decay_length(), quad)


def force_on_layer(stack: LayerStack, j: int, quad: QuadratureSpec | None = None
                   ) -> ForceResult:
    """Force per unit area on interior layer ``j`` from the stress on its faces."""
    j = stack.check_index(j)
    if j == 0 or j == len(stack) - 1:
        raise ValueError("force_on_layer needs an interior layer")
    d = stack[j].thickness
    right, left = stack[j + 1], stack[j - 1]
    if right.semi_infinite:
        z_right = BOUNDARY_OFFSET * d
    else:
        z_right = BOUNDARY_OFFSET * right.thickness
    if left.semi_infinite:
        z_left = -BOUNDARY_OFFSET * d
    else:
        z_left = left.thickness * (1.0 - BOUNDARY_OFFSET)
    t_right = stress_zz(StressContext(stack, j + 1, z_right), quad)
    t_left = stress_zz(StressContext(stack, j - 1, z_left), quad)
    return t_right - t_left


def force_plate_vacuum(wall, plate: Layer, d1: float,
                       quad: QuadratureSpec | None = None) -> ForceResult:
    """Force on a plate at distance d1 from a wall, vacuum in between and behind."""
    if plate.semi_infinite:
        raise ValueError("the plate must have finite thickness")
    if not d1 > 0:
        raise ValueError("d1 must be > 0")

    def integrand(xi, q):
        k = np.sqrt(xi * xi / C**2 + q * q)
        rm = wall.reflection(xi, q)
        e = np.exp(-2.0 * k * d1)
        total = 0.0
        for sigma, r_minus in (("s", rm.rs), ("p", rm.rp)):
            x = reflect_slab(VACUUM, plate, xi, q, sigma) * r_minus * e
            total = total + x / (1.0 - x)
        return PREFACTOR * (q / k) * (-4.0 * k * k) * total

    return _integrate(integrand, d1, quad)


def _plate_bracket(rm, xi, k):
    """r^s (1 - q^2/kappa^2) - r^p (1 + q^2/kappa^2)."""
    w = (xi * xi / C**2) / (k * k)  # = 1 - q^2/kappa^2
    return rm.rs * w - rm.rp * (2.0 - w)


def force_plate_vacuum_first_order(wall, plate, d1: float, dz: float,
                                   quad: QuadratureSpec | None = None) -> ForceResult:
    """Plate force to first order in eps - 1; ``plate`` is an AtomModel or MaterialModel."""
    if not (d1 > 0 and dz > 0):
        raise ValueError("d1 and dz must be > 0")

    def integrand(xi, q):
        k = np.sqrt(xi * xi / C**2 + q * q)
        rm = wall.reflection(xi, q)
        return (PREFACTOR * susceptibility_of(plate, xi) * q * k * np.exp(-2.0 * k * d1)
                * -np.expm1(-2.0 * k * dz) * _plate_bracket(rm, xi, k))

    return _integrate(integrand, d1, quad)


def force_plate_medium(wall, medium, z: float, dz: float,
                       quad: QuadratureSpec | None = None) -> ForceResult:
    """Force on the slab [z, z+dz] of a medium filling the half-space before a wall."""
    if not (z > 0 and dz > 0):
        raise ValueError("z and dz must be > 0")

    def integrand(xi, q):
        k2 = kappa(medium, xi, q)
        chi_e, chi_m = medium.epsilon(xi), medium.mu(xi)
        rm = wall.reflection(xi, q, medium)
        return (PREFACTOR * (xi * xi / C**2) * (1.0 + chi_m) * (chi_e + chi_m + chi_e * chi_m)
                * (q / k2) * np.exp(-2.0 * k2 * z) * (rm.rp - rm.rs)
                * np.expm1(-2.0 * k2 * dz))

    return _integrate(integrand, z, quad)


def force_plate_medium_first_order(wall, plate, z: float, dz: float,
                                   quad: QuadratureSpec | None = None) -> ForceResult:
    """First-order (in eps - 1) version of ``force_plate_medium``; wall seen from vacuum."""
    if not (z > 0 and dz > 0):
        raise ValueError("z and dz must be > 0")

    def integrand(xi, q):
        k = np.sqrt(xi * xi / C**2 + q * q)
        rm = wall.reflection(xi, q)
        return (PREFACTOR * (xi * xi / C**2) * susceptibility_of(plate, xi)
                * (q / k) * np.exp(-2.0 * k * z) * (rm.rp - rm.rs)
                * np.expm1(-2.0 * k * dz))

    return _integrate(integrand, z, quad)


__all__ = [
    "ForceResult", "StressContext", "g_integrand", "stress_zz", "force_on_layer",
    "force_plate_vacuum", "force_plate_vacuum_first_order", "force_plate_medium",
    "force_plate_medium_first_order", "PREFACTOR",
]
