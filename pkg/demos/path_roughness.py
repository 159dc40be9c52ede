"""Trading path roughness: capital growth across crossing radii.

A price path is discretized by betting every time its return since the
last trade reaches norm delta.  For a Brownian path (H = 0.5) the
accumulated squared outcome stays near sigma^2 T no matter how small
delta is, and nothing can be won.  Rougher (H < 0.5) or smoother
(H > 0.5) paths leave an exploitable signature: the capital grows as the
crossing radius shrinks.  The table below also backs out the roughness
exponent H from how the crossing counts scale.
"""

import numpy as np

from gtpbet import gen_fbm, holder_experiment

DELTAS = [0.02, 0.01, 0.005]

for hurst, scale, grid in ((0.3, 0.2, 2e-7), (0.5, 0.25, 1e-6), (0.7, 0.4, 1e-5)):
    path = gen_fbm(hurst, scale, 1.0, grid, seed=3)
    rows, h_est = holder_experiment(path, DELTAS)
    print(f"H = {hurst}   (scale {scale}, grid step {grid:g})")
    print("  delta      N      trV_N      logK")
    for r in rows:
        print(
            f"  {r['delta']:5.3f}  {r['N']:6d}  {r['trV_N']:9.4f}"
            f"  {r['logK']:9.3f}"
        )
    ests = ", ".join(f"{h:.2f}" for h in h_est)
    print(f"  implied roughness exponent between radii: {ests}")
    print()

print("Brownian paths (middle block) pay the learning cost with no gain,")
print("while the smooth path (H = 0.7) already wins at these radii.  The")
print("rough path's edge is the growing trV column, but at this grid it is")
print("still smaller than the ~1.15 nat learning cost per halving of delta;")
print("the acceptance suite runs a 2^26-point grid where it dominates.")
