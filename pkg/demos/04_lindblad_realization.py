"""From jump operators to the steady state.

The chain arises as the no-jump sector of a Hermitian lattice coupled to
a loss channel through bond operators  a_j + i sgn(gamma) b_{j+1}  and
b_j + i sgn(gamma) a_{j+1}.  This script checks the generator identity at
machine precision, solves for the metric operator from the density
couplings alone, and compares the resulting occupations with plain
Boltzmann weights.
"""

import numpy as np

from nhtopo import (
    BoundaryCondition,
    GeneralSystem,
    ModelParams,
    lattice_hamiltonian,
    lindblad_operators,
    metric_operator_model,
    solve_metric,
    steady_probabilities,
    verify_lindblad_consistency,
)

p = ModelParams(u=0.7, t=1.0, j=1.0, gamma=0.5, temperature=1.0, cells=6)
n = 2 * p.cells

for bc in (BoundaryCondition.OPEN, BoundaryCondition.PERIODIC):
    lset = lindblad_operators(p, bc)
    residual = verify_lindblad_consistency(p, bc)
    print(f"{bc.value:>8}: {len(lset)} jump operators, "
          f"generator identity residual {residual:.2e}")

print()
print("metric operator from the site-density couplings (open chain):")
h = lattice_hamiltonian(p, BoundaryCondition.OPEN)
couplings = [np.diag((np.arange(n) == i).astype(complex)) for i in range(n)]
solution = solve_metric(GeneralSystem(h=h, couplings=couplings))
analytic = metric_operator_model(p).lattice_matrix(p.cells)
print("  unique up to scale:", solution.unique)
print("  max deviation from the closed form:",
      f"{np.max(np.abs(solution.t_c - analytic)):.2e}")
print("  residuals:", {k: f"{v:.1e}" for k, v in solution.residuals.items()})

print()
beta = p.beta
probs = steady_probabilities(h, solution.t_c, beta)
energies = np.sort(np.linalg.eigvals(h).real)
boltzmann = np.exp(-beta * energies)
boltzmann /= boltzmann.sum()
print("steady-state occupations vs Boltzmann weights (per mode):")
print(f"{'E':>8} | {'p_steady':>9} | {'p_boltz':>9}")
for e, ps, pb in list(zip(energies, probs, boltzmann))[:6]:
    print(f"{e:8.4f} | {ps:9.5f} | {pb:9.5f}")
print("...")
print("max |p_steady - p_boltz|:", f"{np.max(np.abs(probs - boltzmann)):.3f}",
      " (the metric reweights every mode)")
