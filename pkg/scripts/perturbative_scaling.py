"""Convergence of full plate forces to their first-order (weak dielectric) forms.

For a dielectric wall and a plate with eps - 1 in {1e-1, 1e-2, ...}, prints
the relative deviation |F_full - F_first| / |F_first| for the vacuum and the
medium geometry.  The deviation is second order, so it shrinks about tenfold
per decade of eps - 1.

    python scripts/perturbative_scaling.py [--decades 4]
"""

import argparse

from planarcasimir import (
    Layer,
    MaterialModel,
    force_plate_medium,
    force_plate_medium_first_order,
    force_plate_vacuum,
    force_plate_vacuum_first_order,
    half_space,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wall-eps", type=float, default=2.0, help="static wall permittivity")
    ap.add_argument("--resonance", type=float, default=1e17, help="Lorentz resonance, rad/s")
    ap.add_argument("--d1", type=float, default=1e-6, help="wall-plate distance, m")
    ap.add_argument("--dz", type=float, default=1e-6, help="plate thickness, m")
    ap.add_argument("--decades", type=int, default=3)
    args = ap.parse_args()

    wall = half_space(MaterialModel.lorentz(args.wall_eps, args.resonance))
    print(f"{'eps-1':>8} {'geometry':>8} {'F_full (N/m^2)':>16} {'F_first':>16} "
          f"{'deviation':>11} {'shrink':>8}")
    for geometry in ("vacuum", "medium"):
        prev = None
        for k in range(1, args.decades + 1):
            chi = 10.0**-k
            m = MaterialModel.lorentz(1 + chi, args.resonance)
            if geometry == "vacuum":
                full = force_plate_vacuum(wall, Layer(args.dz, m), args.d1)
                first = force_plate_vacuum_first_order(wall, m, args.d1, args.dz)
            else:
                full = force_plate_medium(wall, m, args.d1, args.dz)
                first = force_plate_medium_first_order(wall, m, args.d1, args.dz)
            dev = abs(full.value - first.value) / abs(first.value)
            shrink = f"{prev / dev:8.2f}" if prev else f"{'':>8}"
            print(f"{chi:8.0e} {geometry:>8} {full.value:16.6e} {first.value:16.6e} "
                  f"{dev:11.3e} {shrink}")
            prev = dev


if __name__ == "__main__":
    main()
