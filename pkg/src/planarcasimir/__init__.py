"""Zero-temperature Casimir stresses, plate forces and Casimir-Polder potentials
in planar magnetodielectric structures, evaluated on the imaginary frequency axis."""

from .constants import C, EPS0, HBAR, MU0
from .cp import (
    CpResult,
    asymptote,
    cp_screened,
    cp_unscreened,
    force_density_profile,
    mirror_potential,
    plate_potential,
)
from .layers import (
    IDEAL_MIRROR,
    NO_WALL,
    SEMI_INFINITE,
    CustomWall,
    Layer,
    LayerStack,
    ReflectionPair,
    StackWall,
    fresnel,
    half_space,
    kappa,
    reflect_slab,
    reflect_stack,
    reflection_pair,
)
from .materials import (
    PERFECT_MIRROR,
    VACUUM,
    AtomModel,
    MaterialModel,
    Oscillator,
    OscillatorSet,
    alpha_at,
    epsilon_at,
    epsilon_from_atoms,
    mu_at,
)
from .quad import QuadratureSpec, integrate_halfline, integrate_quadrant
from .stress import (
    ForceResult,
    StressContext,
    force_on_layer,
    force_plate_medium,
    force_plate_medium_first_order,
    force_plate_vacuum,
    force_plate_vacuum_first_order,
    g_integrand,
    stress_zz,
)

__version__ = "0.1.0"
