"""Walk the two-qubit phase gate exp(i phi Z x Z) across its whole range.

The gate's entangling capacity has a closed form, 2 log2(cos phi + sin phi)
on [0, pi/2], which the numerical search should trace point by point.  This
script samples a few angles with a reduced budget and prints the comparison;
the full 33-point curve with CSV output is `entcap phase-curve`.
"""

import numpy as np

from entcap import SearchConfig, gate_family, unassisted_capacity, unitary_channel

cfg = SearchConfig(restarts=12, seed=0)

print(f"{'phi':>8}  {'analytic':>12}  {'searched':>12}  {'deviation':>10}")
for phi in np.linspace(0.0, np.pi / 2, 9):
    analytic = 2 * np.log2(np.cos(phi) + np.sin(phi))
    ch = unitary_channel(gate_family("phase", phi=float(phi)))
    est = unassisted_capacity(ch, cfg)
    print(
        f"{phi:8.4f}  {analytic:12.8f}  {est.value:12.8f}  "
        f"{abs(est.value - analytic):10.2e}"
    )

print()
print("The curve rises from zero, peaks at one ebit at pi/4, and falls back:")
print("a quarter turn of ZZ interaction is exactly one Bell pair's worth.")
