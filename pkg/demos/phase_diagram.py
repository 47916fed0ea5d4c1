#!/usr/bin/env python3
"""Phase diagram of the scalar autoregressive chain with log-Pareto innovations.

X_n = a X_(n-1) + Y_n with P[ln(1+Y) > t] = (1 + beta t)^-p splits into
three regimes driven by p and the contraction rate lambda = -ln a:

  * p > 1              -> positive recurrent (stationary law exists)
  * p = 1, beta*lambda >= 1 -> null recurrent
  * otherwise          -> transient

This script sweeps the (p, lambda) plane with the series classifier and
prints the resulting phase table; with matplotlib available it also saves
a phase map to demos/output/phase_diagram.png.
"""

import math
import os

import numpy as np

from subcrit import LogPareto, series_verdict

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")

LABELS = {"positive_recurrent": "P", "recurrent": "R", "transient": "T", "inconclusive": "?"}


def main() -> None:
    beta = 1.0
    p_grid = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0]
    lam_grid = [0.25, 0.5, math.log(2.0), 1.0, 1.5, 2.0]

    print("classifier outcome per (p, lambda), beta = 1")
    print("P = positive recurrent, R = (null) recurrent, T = transient, ? = unresolved\n")
    header = "p \\ lam " + "".join(f"{lam:>8.3f}" for lam in lam_grid)
    print(header)
    grid = np.empty((len(p_grid), len(lam_grid)), dtype=int)
    for i, p in enumerate(p_grid):
        row = f"{p:>7.2f} "
        for j, lam in enumerate(lam_grid):
            verdict = series_verdict(LogPareto(beta, p), lam, y=1.0, n_max=200_000)
            row += f"{LABELS[verdict.outcome]:>8}"
            grid[i, j] = list(LABELS).index(verdict.outcome)
        print(row)

    print("\nThe p = 1 row flips from T to R exactly where beta*lambda crosses 1,")
    print("matching the Raabe limit 1/(beta*lambda) of the partial-product series.")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping figure")
        return
    os.makedirs(OUT_DIR, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    im = ax.imshow(grid, origin="lower", cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(lam_grid)), [f"{v:.2f}" for v in lam_grid])
    ax.set_yticks(range(len(p_grid)), [f"{v:.2f}" for v in p_grid])
    ax.set_xlabel("lambda = -ln a")
    ax.set_ylabel("p (log-Pareto exponent)")
    ax.set_title("recurrence phases of the contractive AR chain")
    fig.colorbar(im, ticks=range(4), label="0=P 1=R 2=T 3=?")
    path = os.path.join(OUT_DIR, "phase_diagram.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"figure saved to {path}")


if __name__ == "__main__":
    main()
