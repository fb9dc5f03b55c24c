"""Interaction costs of two-qubit gates when local operations are free.

The optimal cost is the distance from the eigenphase vector to the sum-zero
pi-lattice.  The CNOT class lands at pi/2, the SWAP class at sqrt(3)/2 * pi,
and dressing a gate with arbitrary single-qubit rotations changes nothing.
"""

import numpy as np

from cartancost import (
    builtin_split,
    cheap_invariance_check,
    expm,
    haar_random_special_unitary,
    optimal_cost,
    pauli_matrix,
)

split = builtin_split(2, "two_local")

cnot_core = expm(1j * (np.pi / 4) * pauli_matrix("XX"))
swap_core = expm(1j * (np.pi / 4) * sum(pauli_matrix(s) for s in ("XX", "YY", "ZZ")))

for name, gate, expected in [
    ("CNOT class", cnot_core, np.pi / 2),
    ("SWAP class", swap_core, np.sqrt(3) * np.pi / 2),
]:
    report = optimal_cost(gate, split)
    print(f"{name}: cost = {report.cost:.12f}  (expected {expected:.12f})")
    print(f"  eigenphases {np.round(report.eigenphases, 4)}  lattice point {report.lattice_point}")

# local dressings are free: the cost does not move
inv = cheap_invariance_check(cnot_core, split, samples=25, seed=0)
print(f"CNOT class under 25 random local dressings: max deviation {inv.max_deviation:.2e}")

# a generic gate costs something strictly between 0 and the SWAP class
u = haar_random_special_unitary(4, 123)
print("Haar-random SU(4) cost:", optimal_cost(u, split).cost)
