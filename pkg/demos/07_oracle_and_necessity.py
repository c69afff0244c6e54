"""The sampling oracle and brute-force necessity testing.

Every criterion in this package states: an interpolant exists iff a matrix
is PSD.  The necessity direction can be exercised numerically: sample a
certified Schur-class element, evaluate it on random admissible data to
manufacture interpolation conditions, and confirm the criterion accepts.
The sampler certifies contractivity up front (sup-norm bound on the disk,
homogeneous-level Gram bounds on the ball and quiver), so the margins
below are honest.
"""

import numpy as np

from picklab import necessity, oracle

# --- what a sample looks like -----------------------------------------------
blaschke = oracle.sample_blaschke(3, seed=5)
print("Blaschke sample: degree-3 inner function, margin %.3f, "
      "truncation tail %.1e" % (blaschke.contractivity_margin,
                                blaschke.tail_bound))
print("|b(0.4 + 0.2j)| =", abs(oracle.eval_point(blaschke, 0.4 + 0.2j)[0, 0]))

poly = oracle.sample_contractive_poly(2, 2, 3, "disk", seed=6)
print("matrix polynomial: certified norm bound %.2f (scale %.3f applied)"
      % (poly.norm_bound, poly.scale))
print("64-block Toeplitz truncation norm:",
      round(oracle.toeplitz_truncation_norm(poly, 64), 6), "<= bound")

ball_sample = oracle.sample_contractive_poly(2, 2, 2, "ball", seed=7, d=2)
print("free-ball sample re-verified at a larger truncation:",
      oracle.toeplitz_truncation_norm(ball_sample, 5) <= 0.95 + 1e-10)

# --- functional-calculus consistency ------------------------------------------
X = np.eye(2) + 0j
lam = 0.3 - 0.2j
lhs = oracle.eval_ltoa(poly, X, lam * np.eye(2))
rhs = X @ oracle.eval_point(poly, lam)
print("eval at lam*I == value at lam:", np.max(np.abs(lhs - rhs)) < 1e-12)

# --- necessity margins across every criterion ---------------------------------
print("\nworst Pick-matrix margin over 10 seeded trials per setting")
print("(nonnegative margin = criterion accepted the oracle data)")
for setting in necessity.SETTINGS:
    res = necessity.run_suite(setting, trials=10, seed=42)
    print("  %-13s min eig %+.2e  margin %+.2e  pass=%s"
          % (setting, res.worst_min_eigenvalue, res.worst_margin, res.passed))
