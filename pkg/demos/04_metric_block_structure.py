"""Measure the penalty metric in KAK coordinates by finite differences.

In (L, Z, M) coordinates the pulled-back Gram develops a characteristic
structure as the penalty weight shrinks: the central block is exactly the
identity, the first block is eps times the squared BCH operator of L, and
the (1,2)/(2,3) cross blocks vanish identically.  The (1,3) cross block is
itself of order eps: it only disappears in the eps -> 0 limit, which is
why the structure check runs in the small-eps regime.
"""

import numpy as np

from cartancost import (
    PenaltyMetric,
    bch_matrix,
    builtin_split,
    pullback_gram,
    random_hamiltonian,
    verify_gram_structure,
)

np.set_printoptions(precision=6, suppress=True)

split = builtin_split(1, "single_x")
rng = np.random.default_rng(3)
base = (
    random_hamiltonian(1, split.l_basis, rng, norm=0.8),
    random_hamiltonian(1, split.z_basis, rng, norm=0.8),
    random_hamiltonian(1, split.l_basis, rng, norm=0.8),
)

for eps in (1e-2, 1e-4, 1e-6):
    metric = PenaltyMetric(split, eps)
    gram = pullback_gram(base, metric, fd_step=1e-4)
    corner = float(gram.block(1, 3)[0, 0])
    print(f"eps = {eps:g}")
    print(gram.gram)
    print(f"  corner block / eps = {corner / eps:.6f}  (eps-proportional)")
    report = verify_gram_structure(gram, metric)
    print(f"  structure ok at strict tolerances: {report.all_ok}")
    print()

# the first block against the BCH prediction
metric = PenaltyMetric(split, 1e-4)
gram = pullback_gram(base, metric)
bch = bch_matrix(base[0], split)
predicted = metric.epsilon * bch.T @ bch
print("first block   :", gram.block(1, 1).ravel())
print("eps * BCH^T BCH:", predicted.ravel())
