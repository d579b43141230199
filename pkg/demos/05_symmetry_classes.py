"""Ten classes for quantum states of non-Hermitian lattices.

A non-Hermitian Hamiltonian and its steady state need not share
antiunitary symmetries: the relations that survive are the linearized
ones built on the eigenvalue-conjugation map C(H).  Three showcases:

  1. the reference chain sits in class BDI* for every valid coupling,
     even where an extra sublattice symmetry appears (u = t = 0);
  2. breaking reciprocity (sin k -> sin k + delta) removes the
     antiunitary symmetries but keeps the linearized chiral one: AIII*;
  3. rescaling the Hamiltonian by (1 - i) destroys the ordinary chiral
     relation while the linearized one (and hence the state's symmetry)
     survives.
"""

import numpy as np

from nhtopo import (
    BoundaryCondition,
    ModelParams,
    build_report,
    check_linearized,
    check_ordinary,
    classify,
    lattice_hamiltonian,
    model_symmetry_ops,
    per_cell_operator,
)
from nhtopo.symmetry import STATE_CLASSES

OPEN = BoundaryCondition.OPEN
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def show(name, h, cells):
    report = build_report(h, **model_symmetry_ops(cells))
    label = classify(report)
    triple = report.triple()
    print(f"{name}")
    print(f"  (LTRS, PHS, LCS) = {triple}  ->  {label.state_class}"
          f"  groups d=1,2,3: {label.invariant_groups}")
    return report


p = ModelParams(u=0.7, t=1.0, j=1.0, gamma=0.5, cells=8)
show("reference chain", lattice_hamiltonian(p, OPEN), p.cells)

p0 = ModelParams(u=0.0, t=0.0, j=1.0, gamma=0.5, cells=8)
rep = show("chain at u = t = 0 (extra sublattice symmetry)",
           lattice_hamiltonian(p0, OPEN), p0.cells)
print(f"  sublattice relation holds: {rep.sublattice} "
      "(it imposes nothing on the state class)")

h_nr = lattice_hamiltonian(p0, OPEN, sin_shift=0.3)
show("non-reciprocal chain (sin k -> sin k + 0.3)", h_nr, p0.cells)

print()
print("(1 - i)-rescaled chain, L = 8:")
h_prime = (1.0 - 1.0j) * lattice_hamiltonian(p, OPEN)
chiral = per_cell_operator(SX, p.cells)
ok_cs, res_cs = check_ordinary(h_prime, chiral, "cs")
ok_lcs, res_lcs = check_linearized(h_prime, chiral, "lcs")
print(f"  ordinary chiral relation: {ok_cs} (residual {res_cs:.2e})")
print(f"  linearized chiral relation: {ok_lcs} (residual {res_lcs:.2e})")

print()
print("full classification table (state class: d=1, d=2, d=3):")
for state, _, groups in STATE_CLASSES.values():
    print(f"  {state:>6}: {groups[0]:>2} {groups[1]:>2} {groups[2]:>2}")
