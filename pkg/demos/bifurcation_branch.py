"""Follow the positive solution branch of the 1D problem on (0, 2*pi).

The trivial solution loses its last stability at beta_bar = (1 - lam1^2)/lam1
= 3.75; the nontrivial branch bifurcates subcritically with amplitude
~ sqrt(beta_bar - beta) and stays strictly stable down past sqrt(8).
"""

import math
from pathlib import Path

import numpy as np

from efk import hyperrectangle
from efk.continuation import (ContinuationConfig, amplitude_law_slope,
                              bifurcation_point, continue_branch, seed_branch)

OUT = Path("bifurcation_branch_out")


def main():
    OUT.mkdir(exist_ok=True)
    dom = hyperrectangle(2 * math.pi)
    bb = bifurcation_point(dom)
    print(f"bifurcation point beta_bar = {bb}")

    seed = seed_branch(dom, bb, epsilon=0.05, modes=(48,))
    print(f"seed at beta = {seed.beta}: sup = {seed.sup_norm:.4f}, nu1 = {seed.nu1:.4f}")

    cfg = ContinuationConfig(beta_start=seed.beta, ds=0.02, max_steps=400,
                             direction="decreasing_beta", beta_min=0.5)
    branch = continue_branch(cfg, seed)
    print(f"{len(branch)} branch points, beta down to {branch[-1].beta:.4f}")
    np.savetxt(OUT / "beta_supnorm.dat",
               [[p.beta, p.sup_norm] for p in branch], fmt="%.10g")
    np.savetxt(OUT / "beta_nu1.dat",
               [[p.beta, p.nu1] for p in branch], fmt="%.10g")

    slope = amplitude_law_slope(dom, (48,))
    print(f"amplitude law: log||u|| vs log(beta_bar - beta) slope = {slope:.4f} "
          f"(subcritical square root)")

    on_segment = [p for p in branch if p.beta >= math.sqrt(8)]
    print(f"nu1 > 0 on [sqrt(8), beta_bar): "
          f"{all(p.nu1 > 0 for p in on_segment)} "
          f"(min {min(p.nu1 for p in on_segment):.4f})")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot([p.beta for p in branch], [p.sup_norm for p in branch], "-o", ms=2)
        ax.axvline(bb, color="k", ls=":", lw=0.8)
        ax.axvline(math.sqrt(8), color="gray", ls=":", lw=0.8)
        ax.set_xlabel("beta")
        ax.set_ylabel("sup |u|")
        fig.savefig(OUT / "branch.png", dpi=120)
        plt.close(fig)
    except ImportError:
        pass
    print(f"branch data written under {OUT}/")


if __name__ == "__main__":
    main()
