"""Planar stacks and their reflection coefficients at imaginary frequency.

Layers are indexed 0..N-1 from left to right; the first and last are
semi-infinite.  At ``omega = i xi`` every propagation constant

    kappa_j = sqrt(xi**2 eps_j mu_j / c**2 + q**2)

is real and non-negative, so all reflection coefficients are real and all
propagation factors ``exp(-2 kappa_j d_j)`` are decaying.  Generalized
reflection coefficients are built by the downward recursion

    r_k = (r_{k/k+1} + r_{k+1} e_{k+1}) / (1 + r_{k/k+1} r_{k+1} e_{k+1})

starting from the outermost interface (or from the first perfect mirror).
All functions broadcast over array-valued ``xi`` and ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .constants import C
from .materials import (
    PERFECT_MIRROR,
    VACUUM,
    MaterialModel,
    PerfectMirror,
    epsilon_at,
    mu_at,
)

SEMI_INFINITE = math.inf

Side = Literal["+", "-"]
Polarization = Literal["s", "p"]


@dataclass(frozen=True)
class Layer:
    thickness: float
    material: MaterialModel | PerfectMirror = VACUUM

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"layer thickness must be > 0, got {self.thickness}")

    @property
    def semi_infinite(self) -> bool:
        return math.isinf(self.thickness)


@dataclass(frozen=True)
class LayerStack:
    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if len(layers) < 2:
            raise ValueError("a stack needs at least two layers")
        if not (layers[0].semi_infinite and layers[-1].semi_infinite):
            raise ValueError("first and last layers must be semi-infinite")
        for i, layer in enumerate(layers[1:-1], start=1):
            if layer.semi_infinite:
                raise ValueError(f"interior layer {i} must have finite thickness")

    def __len__(self):
        return len(self.layers)

    def __getitem__(self, j) -> Layer:
        return self.layers[j]

    def check_index(self, j: int) -> int:
        if not (isinstance(j, (int, np.integer)) and 0 <= j < len(self.layers)):
            raise IndexError(f"layer index {j} out of range for a {len(self.layers)}-layer stack")
        return int(j)

    def uniform_beyond(self, j: int, side: Side) -> bool:
        """True when every layer on ``side`` of layer j has j's material (r == 0)."""
        j = self.check_index(j)
        others = self.layers[j + 1:] if side == "+" else self.layers[:j]
        m = self.layers[j].material
        return all(layer.material == m for layer in others)


@dataclass(frozen=True)
class ReflectionPair:
    rs: np.ndarray | float
    rp: np.ndarray | float

    def __getitem__(self, sigma: Polarization):
        if sigma == "s":
            return self.rs
        if sigma == "p":
            return self.rp
        raise KeyError(sigma)


def _material(x) -> MaterialModel | PerfectMirror:
    return x.material if isinstance(x, Layer) else x


def _polarization(sigma):
    if sigma not in ("s", "p"):
        raise ValueError(f"polarization must be 's' or 'p', got {sigma!r}")
    return sigma


def kappa(layer, xi, q):
    """Propagation constant kappa = sqrt(xi^2 eps mu / c^2 + q^2) in rad/m."""
    m = _material(layer)
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    if isinstance(m, PerfectMirror):
        out = np.full(np.broadcast(xi, q).shape, np.inf)
    else:
        n2 = epsilon_at(m, xi) * mu_at(m, xi)
        out = np.hypot(xi * np.sqrt(n2) / C, q)
    return float(out) if out.ndim == 0 else out


def _fresnel_from_kappa(ma, mb, ka, kb, xi):
    if isinstance(ma, PerfectMirror):
        raise ValueError("reflection seen from inside a perfect mirror is undefined")
    shape = np.broadcast(ka, kb).shape
    if isinstance(mb, PerfectMirror):
        return np.full(shape, -1.0), np.full(shape, 1.0)
    # work with susceptibilities: for nearly matched media the numerators
    # k_a w_b - k_b w_a would otherwise be lost to cancellation
    ea, eb = ma.epsilon(xi), mb.epsilon(xi)
    ua, ub = ma.mu(xi), mb.mu(xi)
    dn2 = (eb - ea) + (ub - ua) + (eb * ub - ea * ua)
    ksum = ka + kb
    with np.errstate(invalid="ignore", divide="ignore"):
        dk = np.where(ksum > 0, xi * xi / C**2 * dn2 / np.where(ksum > 0, ksum, 1.0), 0.0)
    out = []
    for wa, wb in ((ua, ub), (ea, eb)):
        num = ka * (wb - wa) - (1.0 + wa) * dk
        den = ka * (1.0 + wb) + kb * (1.0 + wa)
        with np.errstate(invalid="ignore", divide="ignore"):
            out.append(np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0))
    return out[0], out[1]


def fresnel_pair(a, b, xi, q) -> ReflectionPair:
    """Single-interface amplitudes for a wave in ``a`` hitting ``b``."""
    ma, mb = _material(a), _material(b)
    rs, rp = _fresnel_from_kappa(ma, mb, kappa(ma, xi, q), kappa(mb, xi, q),
                                 np.asarray(xi, dtype=float))
    return ReflectionPair(_squeeze(rs), _squeeze(rp))


def fresnel(a, b, sigma: Polarization, xi, q):
    return fresnel_pair(a, b, xi, q)[_polarization(sigma)]


def _squeeze(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _decay(k, d):
    """exp(-2 k d), exactly 0 for semi-infinite layers."""
    if math.isinf(d):
        return np.zeros_like(np.asarray(k, dtype=float))
    with np.errstate(invalid="ignore"):
        return np.exp(-2.0 * np.asarray(k) * d)


def reflect_slab(front, slab: Layer, xi, q, sigma: Polarization):
    """Reflection off a finite slab embedded in ``front`` on both sides."""
    _polarization(sigma)
    if slab.semi_infinite:
        raise ValueError("reflect_slab needs a finite slab")
    r12 = fresnel(front, slab, sigma, xi, q)
    e = _decay(kappa(slab, xi, q), slab.thickness)
    return _squeeze(r12 * (1.0 - e) / (1.0 - r12 * r12 * e))


def _recursion(seq, xi, q):
    """Generalized (rs, rp) seen from seq[0] looking towards seq[-1]."""
    first = seq[0].material
    if isinstance(first, PerfectMirror):
        raise ValueError("reflection seen from inside a perfect mirror is undefined")
    for m, layer in enumerate(seq[1:], start=1):
        if isinstance(layer.material, PerfectMirror):
            seq = seq[:m + 1]
            break
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    kap = [kappa(layer, xi, q) for layer in seq]
    shape = np.broadcast(xi, q).shape
    rs = np.zeros(shape)
    rp = np.zeros(shape)
    for k in range(len(seq) - 2, -1, -1):
        fs, fp = _fresnel_from_kappa(seq[k].material, seq[k + 1].material,
                                     kap[k], kap[k + 1], xi)
        if isinstance(seq[k + 1].material, PerfectMirror) or k == len(seq) - 2:
            rs, rp = fs, fp
            continue
        e = _decay(kap[k + 1], seq[k + 1].thickness)
        rs = (fs + rs * e) / (1.0 + fs * rs * e)
        rp = (fp + rp * e) / (1.0 + fp * rp * e)
    return rs, rp


def reflection_pair(stack: LayerStack, j: int, side: Side, xi, q) -> ReflectionPair:
    """Generalized reflection coefficients r_{j+} (towards larger index) or r_{j-}."""
    j = stack.check_index(j)
    if side == "+":
        seq = stack.layers[j:]
    elif side == "-":
        seq = stack.layers[j::-1]
    else:
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    if len(seq) == 1:
        if isinstance(seq[0].material, PerfectMirror):
            raise ValueError("reflection seen from inside a perfect mirror is undefined")
        z = np.zeros(np.broadcast(np.asarray(xi), np.asarray(q)).shape)
        return ReflectionPair(_squeeze(z), _squeeze(z.copy()))
    rs, rp = _recursion(seq, xi, q)
    return ReflectionPair(_squeeze(rs), _squeeze(rp))


def reflect_stack(stack: LayerStack, j: int, side: Side, sigma: Polarization, xi, q):
    return reflection_pair(stack, j, side, xi, q)[_polarization(sigma)]


def fresnel_first_order(chi, xi, q) -> ReflectionPair:
    """Vacuum / weak-dielectric amplitudes to first order in chi = eps - 1 (mu = 1)."""
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    k2 = xi * xi / C**2 + q * q
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(k2 > 0, xi * xi / (C**2 * k2), 0.0)
    return ReflectionPair(_squeeze(-chi * w / 4.0), _squeeze(0.5 * chi * (1.0 - 0.5 * w)))


def slab_first_order(chi, thickness, xi, q) -> ReflectionPair:
    """Weak-dielectric slab in vacuum, first order in chi."""
    r = fresnel_first_order(chi, xi, q)
    k = np.sqrt(np.asarray(xi, dtype=float) ** 2 / C**2 + np.asarray(q, dtype=float) ** 2)
    f = -np.expm1(-2.0 * k * thickness)
    return ReflectionPair(_squeeze(r.rs * f), _squeeze(r.rp * f))


# -- walls -----------------------------------------------------------------


@dataclass(frozen=True)
class StackWall:
    """A wall filling z < 0: a semi-infinite layer followed by finite layers.

    Reflection coefficients are those seen from the half-space z > 0, which
    is vacuum unless another ``medium`` is given.
    """

    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers or not layers[0].semi_infinite:
            raise ValueError("a wall starts with a semi-infinite layer")
        if any(layer.semi_infinite for layer in layers[1:]):
            raise ValueError("only the first wall layer may be semi-infinite")

    def stack(self, medium=VACUUM) -> LayerStack:
        return LayerStack(self.layers + (Layer(SEMI_INFINITE, medium),))

    def reflection(self, xi, q, medium=VACUUM) -> ReflectionPair:
        st = self.stack(medium)
        return reflection_pair(st, len(st) - 1, "-", xi, q)


@dataclass(frozen=True)
class CustomWall:
    """Wall given directly by ``func(xi, q, medium) -> (rs, rp)``; |r| <= 1 expected."""

    func: Callable

    def reflection(self, xi, q, medium=VACUUM) -> ReflectionPair:
        rs, rp = self.func(np.asarray(xi, dtype=float), np.asarray(q, dtype=float), medium)
        shape = np.broadcast(np.asarray(xi), np.asarray(q)).shape
        return ReflectionPair(np.broadcast_to(rs, shape) * 1.0, np.broadcast_to(rp, shape) * 1.0)


def half_space(material) -> StackWall:
    return StackWall((Layer(SEMI_INFINITE, material),))


IDEAL_MIRROR = half_space(PERFECT_MIRROR)
NO_WALL = half_space(VACUUM)


__all__ = [
    "SEMI_INFINITE", "Layer", "LayerStack", "ReflectionPair", "kappa", "fresnel",
    "fresnel_pair", "reflect_slab", "reflection_pair", "reflect_stack",
    "fresnel_first_order", "slab_first_order", "StackWall", "CustomWall",
    "half_space", "IDEAL_MIRROR", "NO_WALL",
]
