#!/usr/bin/env python3
"""Mortal frogs: how heavy must sleeper counts be to wake infinitely many?

Each site n >= 0 holds Y_n sleeping frogs; woken frogs random-walk with
right-step probability r and die at a geometric rate 1-p.  The chance a
frog ever advances one site to the right is the smaller root rho of
a = p r + p (1-r) a^2, and the wake wave survives forever iff the
sleeper-count series with rate -ln rho converges.  Bounded counts always
die out; counts with ln-tails fatter than (2 ln(1/rho))/t keep the wave
alive, which the simulations show as wake-budget saturation.
"""

import math

import numpy as np

from subcrit import FrogConfig, frog_rho, frog_verdict, simulate_frog
from subcrit.dist import DiscreteTable, ExpOf, FloorOf, ParetoTail, Shifted
from subcrit.streams import child_rng


def main() -> None:
    print("walk-survival root rho(p, r):")
    for p, r in ((1.0, 0.25), (0.9, 0.5), (0.8, 0.4), (0.6, 0.3)):
        print(f"  p={p:.2f}, r={r:.2f}: rho = {frog_rho(p, r):.6f}")

    p, r = 0.8, 0.4
    lam = -math.log(frog_rho(p, r))
    print(f"\nworking point p={p}, r={r}: rho={math.exp(-lam):.4f}, -ln rho={lam:.4f}")

    bounded = DiscreteTable([0, 1, 2], [0.3, 0.4, 0.3])
    verdict = frog_verdict(p, r, bounded, 1.0)
    print(f"\nbounded sleeper counts -> classifier: {verdict.outcome}")
    woken, truncated = [], 0
    for i in range(300):
        out = simulate_frog(FrogConfig(p, r, bounded), child_rng(21, i))
        woken.append(out.woken_count)
        truncated += out.truncated
    print(f"  300 runs: truncated {truncated}, woken mean {np.mean(woken):.1f}, "
          f"max {max(woken)}")

    heavy = Shifted(FloorOf(ExpOf(ParetoTail(2.0 * lam))), 50.0)
    verdict = frog_verdict(p, r, heavy, 60.0)
    print(f"\nheavy sleeper counts (Raabe limit 2) -> classifier: {verdict.outcome}")
    hits = 0
    for i in range(300):
        out = simulate_frog(
            FrogConfig(p, r, heavy, wake_cap=2000), child_rng(22, i)
        )
        hits += out.truncated
    print(f"  300 runs at wake_cap=2000: budget saturated in {hits}")


if __name__ == "__main__":
    main()
