"""Physical constants (CODATA values via scipy.constants), SI units.

``MU0`` is derived from ``EPS0`` so that eps0 mu0 c^2 = 1 holds to rounding;
the independently rounded tabulated values miss it by about 1e-12.
"""

from scipy import constants as _c

HBAR = _c.hbar
C = _c.c
EPS0 = _c.epsilon_0
MU0 = 1.0 / (EPS0 * C * C)

__all__ = ["HBAR", "C", "EPS0", "MU0"]
