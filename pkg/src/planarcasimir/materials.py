"""Response functions on the imaginary frequency axis.

Every response is a sum of damped oscillator terms evaluated at
``omega = i xi``::

    chi(i xi) = sum_k Omega_k**2 / (omega_k**2 + xi**2 + gamma_k * xi)

which is real, positive and non-increasing for ``xi >= 0``.  Permittivity and
permeability are ``1 + chi``; the atomic polarizability is ``scale * chi``
plus an optional frequency-independent part.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import EPS0

WEAK_DIELECTRIC_LIMIT = 0.05


@dataclass(frozen=True)
class Oscillator:
    strength: float  # Omega_k, rad/s
    resonance: float  # omega_k, rad/s
    damping: float = 0.0  # gamma_k, rad/s

    def __post_init__(self):
        if not (math.isfinite(self.resonance) and self.resonance > 0):
            raise ValueError(f"oscillator resonance must be > 0, got {self.resonance}")
        if not (math.isfinite(self.strength) and self.strength >= 0):
            raise ValueError(f"oscillator strength must be >= 0, got {self.strength}")
        if not (math.isfinite(self.damping) and self.damping >= 0):
            raise ValueError(f"oscillator damping must be >= 0, got {self.damping}")


@dataclass(frozen=True)
class OscillatorSet:
    terms: tuple[Oscillator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros_like(xi)
        for t in self.terms:
            out = out + t.strength**2 / (t.resonance**2 + xi * xi + t.damping * xi)
        return out

    @property
    def is_empty(self) -> bool:
        return all(t.strength == 0 for t in self.terms)


@dataclass(frozen=True)
class MaterialModel:
    """Magnetodielectric medium with eps = 1 + chi_e and mu = 1 + chi_m."""

    epsilon: OscillatorSet = field(default_factory=OscillatorSet)
    mu: OscillatorSet = field(default_factory=OscillatorSet)

    @property
    def is_vacuum(self) -> bool:
        return self.epsilon.is_empty and self.mu.is_empty

    @classmethod
    def lorentz(cls, eps_static: float, resonance: float, damping: float = 0.0,
                mu_static: float = 1.0, mu_resonance: float | None = None):
        """Single-oscillator medium with given static permittivity (and permeability)."""
        if eps_static < 1 or mu_static < 1:
            raise ValueError("static permittivity and permeability must be >= 1")
        eps = OscillatorSet((Oscillator(resonance * math.sqrt(eps_static - 1), resonance, damping),))
        mu = OscillatorSet()
        if mu_static > 1:
            w = mu_resonance or resonance
            mu = OscillatorSet((Oscillator(w * math.sqrt(mu_static - 1), w, damping),))
        return cls(eps, mu)


@dataclass(frozen=True)
class PerfectMirror:
    """Ideal conductor: r^p = +1, r^s = -1 for waves incident on it."""


VACUUM = MaterialModel()
PERFECT_MIRROR = PerfectMirror()


@dataclass(frozen=True)
class AtomModel:
    """Ground-state polarizability alpha(i xi) = static + scale * alpha(i xi).

    ``scale`` and ``static`` are in C m^2/V; ``eta`` is the number density
    (1/m^3) of such atoms when they make up a weakly dielectric medium.  A
    non-zero ``static`` part is the frequency-independent idealisation used
    for large-distance checks; it does not vanish as xi -> inf.
    """

    alpha: OscillatorSet = field(default_factory=OscillatorSet)
    scale: float = 1.0
    static: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.scale < 0 or self.static < 0 or self.eta < 0:
            raise ValueError("scale, static and eta must be non-negative")

    @classmethod
    def single_oscillator(cls, alpha0: float, resonance: float, damping: float = 0.0,
                          eta: float = 0.0):
        """Atom with alpha(0) = alpha0 and one resonance."""
        return cls(OscillatorSet((Oscillator(resonance, resonance, damping),)),
                   scale=alpha0, eta=eta)

    @classmethod
    def constant(cls, alpha0: float, eta: float = 0.0):
        return cls(static=alpha0, eta=eta)

    @property
    def alpha0(self) -> float:
        return float(alpha_at(self, 0.0))

    def as_material(self) -> MaterialModel:
        """Medium with eps - 1 = eta * alpha / eps0 (needs static == 0)."""
        if self.static:
            raise ValueError("a frequency-independent polarizability has no oscillator medium")
        f = math.sqrt(self.eta * self.scale / EPS0)
        terms = tuple(Oscillator(t.strength * f, t.resonance, t.damping)
                      for t in self.alpha.terms)
        return MaterialModel(OscillatorSet(terms))


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ValueError("imaginary frequency xi must be >= 0")
    return xi


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def epsilon_at(m: MaterialModel | PerfectMirror, xi):
    xi = _check_xi(xi)
    if isinstance(m, PerfectMirror):
        return _out(np.full_like(xi, np.inf))
    return _out(1.0 + m.epsilon(xi))


def mu_at(m: MaterialModel | PerfectMirror, xi):
    xi = _check_xi(xi)
    if isinstance(m, PerfectMirror):
        return _out(np.ones_like(xi))
    return _out(1.0 + m.mu(xi))


def alpha_at(a: AtomModel, xi):
    """Polarizability alpha(i xi) in C m^2/V."""
    xi = _check_xi(xi)
    return _out(a.static + a.scale * a.alpha(xi))


def susceptibility_of(plate, xi):
    """eps(i xi) - 1 of a weakly dielectric plate given as atoms or as a medium."""
    if isinstance(plate, AtomModel):
        return plate.eta * alpha_at(plate, xi) / EPS0
    _check_xi(xi)
    return _out(plate.epsilon(xi))


def epsilon_from_atoms(a: AtomModel, xi):
    """Weak-dielectric permittivity 1 + eta alpha(i xi) / eps0."""
    x0 = a.eta * alpha_at(a, 0.0) / EPS0
    if x0 > WEAK_DIELECTRIC_LIMIT:
        warnings.warn(f"eta*alpha(0)/eps0 = {x0:.3g} is not small; "
                      "the weak-dielectric mapping is unreliable", stacklevel=2)
    return 1.0 + a.eta * alpha_at(a, xi) / EPS0


__all__ = [
    "Oscillator", "OscillatorSet", "MaterialModel", "PerfectMirror", "AtomModel",
    "VACUUM", "PERFECT_MIRROR", "epsilon_at", "mu_at", "alpha_at",
    "epsilon_from_atoms", "susceptibility_of",
]
