"""Retardation crossover of the Casimir-Polder potential near a perfect mirror.

Plots the unscreened potential scaled as V z^3 (flat at short range) and as
V z^4 (flat at long range), together with the screened potential.  A third
panel shows the screened V z in front of a dispersive dielectric wall, a
diagnostic of the short-range z^-1 law whose underlying approximation is
questionable for a medium atom (a warning is emitted).

    python scripts/retardation_crossover.py [--out crossover.png]
"""

import argparse
import math
import warnings

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from planarcasimir import (  # noqa: E402
    EPS0,
    HBAR,
    AtomModel,
    C,
    MaterialModel,
    half_space,
    mirror_potential,
)
from planarcasimir.cp import screened_short_range_diagnostic  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda0", type=float, default=1e-7, help="c/omega0 in m")
    ap.add_argument("--alpha0", type=float, default=1e-39)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--wall-eps", type=float, default=4.0,
                    help="static permittivity of the dielectric wall (resonant at omega0)")
    ap.add_argument("--out", default="retardation_crossover.png")
    args = ap.parse_args()

    w0 = C / args.lambda0
    atom = AtomModel.single_oscillator(args.alpha0, w0)
    x = np.geomspace(1e-3, 1e3, args.points)
    z = x * args.lambda0
    vu = np.array([mirror_potential(atom, float(t)).value for t in z])
    vs = np.array([mirror_potential(atom, float(t), screened=True).value for t in z])

    # reference scales: non-retarded V z^3 and retarded V z^4 of the unscreened potential
    nonret = -HBAR * args.alpha0 * w0 / (32 * math.pi * EPS0)
    ret = -3 * HBAR * C * args.alpha0 / (32 * math.pi**2 * EPS0)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        wall = half_space(MaterialModel.lorentz(args.wall_eps, w0))
        zd = np.geomspace(1e-4, 1.0, 17) * args.lambda0
        _, vz = screened_short_range_diagnostic(wall, atom, zd)
    for w in caught:
        print(f"warning: {w.message}")

    fig, ax = plt.subplots(1, 3, figsize=(14, 4))
    ax[0].semilogx(x, vu * z**3 / nonret, label="unscreened")
    ax[0].semilogx(x, vs * z**3 / nonret, label="screened")
    ax[0].set_ylabel("V z^3 / (non-retarded V z^3)")
    ax[1].semilogx(x, vu * z**4 / ret, label="unscreened")
    ax[1].semilogx(x, vs * z**4 / ret, label="screened")
    ax[1].axhline(1 / 3, ls=":", c="k")
    ax[1].set_ylabel("V z^4 / (retarded unscreened V z^4)")
    ax[2].semilogx(zd / args.lambda0, vz, c="C1")
    ax[2].set_ylabel("screened V z (J m), dielectric wall, diagnostic only")
    for a in ax:
        a.set_xlabel("z omega0 / c")
    ax[0].legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)

    print(f"{'z/lambda0':>10} {'Vu z^3 / NR':>12} {'Vu z^4 / R':>12} {'Vs/Vu':>10}")
    for i in range(0, len(x), max(1, len(x) // 12)):
        print(f"{x[i]:10.3g} {vu[i] * z[i]**3 / nonret:12.6f} {vu[i] * z[i]**4 / ret:12.6f} "
              f"{vs[i] / vu[i]:10.6f}")
    print(f"figure written to {args.out}")


if __name__ == "__main__":
    main()
