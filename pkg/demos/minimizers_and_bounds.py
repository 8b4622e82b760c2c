"""Global minimizers of the fourth-order Allen-Cahn energy on (0,20)^2.

Computes the positive minimizer for a few beta values and prints the a-priori
bound checks: for beta >= sqrt(8) the solution stays below 1, for smaller
beta only the m_beta bound holds, and the companion field w = -lap u + beta/2 u
stays positive.  Saves each field as CSV and (if matplotlib is around) a
contour plot with the u = 1 level set.
"""

import math
from pathlib import Path

import numpy as np

from efk import hyperrectangle, m_beta
from efk.fieldio import save_field
from efk.minimize import MinimizeConfig, minimize_truncated_positive, w_field_check

OUT = Path(__file__).with_suffix("") .name + "_out"


def main():
    out = Path(OUT)
    out.mkdir(exist_ok=True)
    dom = hyperrectangle(20.0, 20.0)
    for beta in (1.6, math.sqrt(8), 4.0):
        res = minimize_truncated_positive(MinimizeConfig(beta=beta, modes=(96, 96)), dom)
        rep = res.report
        print(f"beta = {beta:.3f}: converged in {res.iterations} iterations")
        print(f"  range [{rep.u_min:.3e}, {rep.u_max:.6f}]   m_beta = {m_beta(beta):.4f}")
        print(f"  bound flags: {rep.bound_flags}")
        print(f"  companion field positive: {w_field_check(res.field, beta)}")
        save_field(res.field, out / f"minimizer_beta_{beta:.2f}", beta=beta)
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt

            vals = res.field.values
            g = res.field.grids
            fig, ax = plt.subplots(figsize=(5, 4))
            im = ax.pcolormesh(g[0], g[1], vals.T, shading="auto")
            ax.contour(g[0], g[1], vals.T, levels=[1.0], colors="k",
                       linestyles="dotted")
            fig.colorbar(im, ax=ax)
            ax.set_title(f"positive minimizer, beta = {beta:.2f}")
            fig.savefig(out / f"minimizer_beta_{beta:.2f}.png", dpi=120)
            plt.close(fig)
        except ImportError:
            pass
    print(f"fields written under {out}/")


if __name__ == "__main__":
    main()
