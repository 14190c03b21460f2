"""Screened / unscreened Casimir-Polder ratio in front of a perfect mirror.

Sweeps z from the non-retarded to the retarded regime for a single-oscillator
atom and prints V_screened / V_unscreened, which tends to 1/3 far away.

    python scripts/screening_ratio.py [--lambda0 1e-7] [--points 13]
"""

import argparse

import numpy as np

from planarcasimir import IDEAL_MIRROR, AtomModel, C, cp_screened, cp_unscreened, mirror_potential


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda0", type=float, default=1e-7, help="c/omega0 in m")
    ap.add_argument("--alpha0", type=float, default=1e-39, help="static polarizability, C m^2/V")
    ap.add_argument("--points", type=int, default=13)
    args = ap.parse_args()

    atom = AtomModel.single_oscillator(args.alpha0, C / args.lambda0)
    print(f"{'z/lambda0':>10} {'V_unscreened (J)':>18} {'V_screened (J)':>18} "
          f"{'ratio (2D)':>12} {'ratio (1D)':>12}")
    for x in np.geomspace(1e-2, 1e3, args.points):
        z = x * args.lambda0
        u = cp_unscreened(IDEAL_MIRROR, atom, z)
        s = cp_screened(IDEAL_MIRROR, atom, z)
        u1 = mirror_potential(atom, z, screened=False)
        s1 = mirror_potential(atom, z, screened=True)
        flag = "" if u.converged and s.converged else "  (not converged)"
        print(f"{x:10.3g} {u.potential:18.6e} {s.potential:18.6e} "
              f"{s.potential / u.potential:12.6f} {s1.value / u1.value:12.6f}{flag}")


if __name__ == "__main__":
    main()
