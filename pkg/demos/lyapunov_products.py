#!/usr/bin/env python3
"""Contraction rate of random nonnegative matrix products.

The chain X_n = A_n X_(n-1) + Y_n is subcritical when the products
A_n ... A_1 decay, i.e. lambda = -lim ln||A_n ... A_1|| / n is positive.
For a constant primitive matrix lambda equals -ln(spectral radius), which
gives an exact cross-check of the Monte Carlo estimator; for genuinely
random ensembles the estimator's replica CI is all we have, and the
deviations |S_n - lambda n| concentrate at the sqrt(n) scale.
"""

import math
import os

import numpy as np

from subcrit import MatrixEnsemble, estimate_lyapunov, perron_limit
from subcrit.matrix_env import sample_sn

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def main() -> None:
    const = MatrixEnsemble.constant([[0.3, 0.1], [0.2, 0.4]])
    rho, h = perron_limit(const.atoms[0])
    print(f"constant environment: spectral radius {rho:.12f}, -ln rho = {-math.log(rho):.12f}")
    print("Perron projection H = lim rho^-n A^n:")
    print(np.array_str(h, precision=6))
    for n in (50, 100, 200, 400):
        est = estimate_lyapunov(const, n, 2, seed=1)
        print(f"  n={n:>4}: lambda_hat = {est.lambda_hat:.12f} "
              f"(error {abs(est.lambda_hat + math.log(rho)):.2e})")

    print()
    mixed = MatrixEnsemble([[[0.25]], [[0.5]]], [0.5, 0.5])
    target = 1.5 * math.log(2.0)
    print(f"two-atom scalar ensemble: exact lambda = -E[ln A] = {target:.9f}")
    for replicas in (20, 100, 500):
        est = estimate_lyapunov(mixed, 300, replicas, seed=7)
        lo, hi = est.interval
        inside = "inside" if lo <= target <= hi else "OUTSIDE"
        print(f"  replicas={replicas:>4}: {est.lambda_hat:.6f} +- {est.half_width:.6f} "
              f"(target {inside} the 99% CI)")

    print()
    two = MatrixEnsemble([[[0.3, 0.1], [0.2, 0.4]], [[0.2, 0.2], [0.1, 0.3]]], [0.5, 0.5])
    n, replicas = 200, 4000
    sn = sample_sn(two, n, replicas, seed=3)
    lam_hat = sn.mean() / n
    z = (sn - lam_hat * n) / math.sqrt(n)
    print(f"concentration at n={n}: std of (S_n - lambda n)/sqrt(n) = {z.std():.4f}")
    for t in (1.0, 2.0, 3.0):
        frac = float((np.abs(z) >= t * z.std()).mean())
        print(f"  P[|S_n - lambda n| >= {t:.0f} sigma sqrt(n)] ~ {frac:.4f}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    os.makedirs(OUT_DIR, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(z, bins=60, density=True, alpha=0.7)
    ax.set_xlabel("(S_n - lambda n) / sqrt(n)")
    ax.set_title("deviation of log product norms at n = 200")
    path = os.path.join(OUT_DIR, "lyapunov_concentration.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"figure saved to {path}")


if __name__ == "__main__":
    main()
