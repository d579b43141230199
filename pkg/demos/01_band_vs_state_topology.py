"""Two invariants, two transition families.

The non-Hermitian chain carries a band winding W that jumps where the
band gap closes (u = +/-t) and a state winding w, computed from the
steady-state effective Hamiltonian, that jumps at shifted critical points
u_c = (T/2) ln((j+gamma)/(j-gamma)) +/- t.  Between the two transition
families the quantum state is topological while the bands are trivial
(region II) or vice versa (region III).
"""

import dataclasses

import numpy as np

from nhtopo import (
    GapClosedError,
    ModelParams,
    band_invariant,
    critical_points,
    gap_closing_points,
    region,
    state_invariant,
)

base = ModelParams(u=0.0, t=1.0, j=1.0, gamma=0.5, temperature=1.0)

print("reference chain: t = 1, j = 1, gamma = 0.5, T = 1")
print("band transitions  u_g = ", gap_closing_points(base))
print("state transitions u_c = ", tuple(round(x, 6) for x in critical_points(base)))
print()

print(f"{'u':>6} | {'W':>2} {'w':>2} | region")
print("-" * 28)
for u in np.arange(-2.0, 2.51, 0.25):
    p = dataclasses.replace(base, u=float(u))
    try:
        w_band = band_invariant(p).value
        w_state = state_invariant(p).value
        label = region(p).region
    except GapClosedError:
        print(f"{u:6.2f} |  transition line")
        continue
    print(f"{u:6.2f} | {w_band:>2} {w_state:>2} | {label}")

print()
print("u = 1.2 sits between u_g+ = 1 and u_c+ ~ 1.549: the bands are")
print("trivial there but the steady state still winds (region II).")

p_ii = dataclasses.replace(base, u=1.2)
print("raw windings at u = 1.2:",
      band_invariant(p_ii).raw, state_invariant(p_ii).raw)
