"""Map the non-negative band of the two-parameter density family.

The reconciled density is the (0, 0) member of a family satisfying the
same marginal and averaging constraints for every parameter pair; only a
narrow slanted band of parameters keeps the density non-negative
everywhere.  This scan prints the band's extent and optionally renders it.
"""

import argparse
from pathlib import Path

import numpy as np

import paircompton as pc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--res", type=int, default=81)
    parser.add_argument("--outdir", default="demo_output")
    args = parser.parse_args()

    fmap = pc.scan_ansatz((-0.01, 0.01), (-0.04, 0.04), args.res)
    ii, jj = np.where(fmap.feasible)
    print(f"feasible cells: {fmap.feasible.sum()} of {fmap.feasible.size}")
    print(f"b_ff extent: [{fmap.b_ff[ii].min():+.4f}, {fmap.b_ff[ii].max():+.4f}]")
    print(f"b_gg extent: [{fmap.b_gg[jj].min():+.4f}, {fmap.b_gg[jj].max():+.4f}]")
    origin = fmap.min_density[np.argmin(np.abs(fmap.b_ff)), np.argmin(np.abs(fmap.b_gg))]
    print(f"density minimum at the origin: {origin:.3e}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.pcolormesh(
        fmap.b_gg, fmap.b_ff, np.minimum(fmap.min_density, 1e-4), shading="nearest",
        cmap="RdBu", vmin=-1e-4, vmax=1e-4,
    )
    ax.contour(fmap.b_gg, fmap.b_ff, fmap.feasible.astype(float), levels=[0.5],
               colors="k", linewidths=1)
    ax.plot(0, 0, "k*", ms=10, label="reconciled model")
    ax.set_xlabel(r"$b_{GG}$")
    ax.set_ylabel(r"$b_{FF}$")
    ax.legend(loc="upper left", fontsize=8)
    fig.colorbar(im, label="density minimum (clipped)")
    fig.tight_layout()
    fig.savefig(outdir / "ansatz_feasibility.png", dpi=150)
    print("wrote", outdir / "ansatz_feasibility.png")


if __name__ == "__main__":
    main()
