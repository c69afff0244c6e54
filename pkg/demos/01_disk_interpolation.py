"""Classical Pick matrices on the unit disk.

Given points lam_1..lam_N in the open disk and target values w_1..w_N, a
Schur-class interpolant (holomorphic, bounded by one) exists exactly when
the Pick matrix [(1 - w_i conj(w_j)) / (1 - lam_i conj(lam_j))] is positive
semidefinite.  This script walks through the scalar criterion, its
tangential versions, and the operator-argument version whose blocks are
geometric operator series summed exactly by a Stein solver.
"""

import numpy as np

from picklab import disk, matcore

rng = np.random.default_rng(1)

# --- the classical two-point picture -------------------------------------
# s(0) = 0, s(1/2) = 1/2 is solved by s(lam) = lam: the Pick matrix is
# singular PSD (the solution is unique up to nothing -- it is extremal).
report = disk.pick_fov([0.0, 0.5], [[[0.0]], [[0.5]]])
print("feasible pair   ->", report.pick.real.tolist(),
      "min eig %.3g" % report.min_eigenvalue, "feasible:", report.feasible)

# Asking for s(0) = 0, s(1/2) = 1 violates the Schwarz lemma; the Pick
# matrix picks this up through a negative eigenvalue (1 - sqrt(5))/2.
report = disk.pick_fov([0.0, 0.5], [[[0.0]], [[1.0]]])
print("infeasible pair ->", report.pick.real.tolist(),
      "min eig %.6f" % report.min_eigenvalue, "feasible:", report.feasible)

# --- tangential data ------------------------------------------------------
# Left-tangential interpolation X_i S(lam_i) = Y_i only constrains S along
# the rows of X_i.  With X_i = I it reduces to the full-value problem.
lams = [0.1 + 0.2j, -0.3 + 0.1j]
W = [(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) * 0.2
     for _ in range(2)]
full = disk.pick_fov(lams, W).pick
tang = disk.pick_lt(lams, [np.eye(2)] * 2, W).pick
print("FOV == LT with identity directions:", np.allclose(full, tang))

# --- operator arguments ---------------------------------------------------
# Replacing the scalar point lam by an operator T with spectral radius < 1
# turns each Pick block into the series sum_n T_i^n (X X* - Y Y*) T_j*^n,
# which the Stein solver evaluates in closed form.
T = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
T *= 0.6 / matcore.operator_norm(T)
X = rng.standard_normal((3, 2)) + 0j
Y = 0.3 * (rng.standard_normal((3, 2)) + 0j)
report = disk.pick_ltoa([T], [X], [Y])
print("LTOA block method:", report.method, "| feasible:", report.feasible)

# Scalar operator points T_i = lam_i I recover the tangential criterion.
scalarized = disk.pick_ltoa([l * np.eye(2) for l in lams],
                            [np.eye(2)] * 2, W)
print("LTOA at lam*I == LT:", np.allclose(scalarized.pick, tang))
