"""Interpolation in the Toeplitz algebra of a directed graph.

A quiver (finite directed graph) generalizes both the disk (one vertex,
one loop) and the free ball (one vertex, d loops): composable arrow paths
index the algebra, and points are arrow-indexed operator tuples whose
per-vertex row blocks are strict contractions.  The worked example is the
two-vertex quiver with a loop alpha at `a` and an arrow beta from `a` to
`b`; its Toeplitz algebra is the lower-triangular 2x2 block algebra
[[H-infinity, 0], [H-infinity_0, constants]].
"""

import numpy as np

from picklab import matcore
from picklab import quiver as qv
from picklab.quiver import Grading, QuiverPoint

rng = np.random.default_rng(3)
G, alpha, beta = qv.two_vertex_example()

# --- paths ------------------------------------------------------------------
print("paths up to length 2:", [p.label for p in qv.paths_up_to(G, 2)])
print("arrow counts match adjacency powers:",
      [int(np.linalg.matrix_power(G.adjacency_matrix(), n).sum())
       for n in range(4)])

# --- the generalized disk -----------------------------------------------------
# At vertex a only alpha arrives, at b only beta: membership asks each of
# those one-entry rows to be a strict contraction.
zdims = Grading(G, {"a": 1, "b": 1})
pt = QuiverPoint("tensor", {"alpha": [[0.6]], "beta": [[0.6]]})
print("membership:", qv.disk_membership(G, zdims, pt))

# --- the operator-argument criterion and its split ---------------------------
# For this quiver the Pick matrix decomposes, after a permutation, into a
# Stein-series block (the H-infinity corner) and a one-term block (the
# constant corner).
xd = Grading(G, {"a": 2, "b": 2})
N = 2
points, X, Y = [], [], []
for _ in range(N):
    Ta = rng.standard_normal((2, 2)) + 0j
    Tb = rng.standard_normal((2, 2)) + 0j
    s = 0.6 / matcore.operator_norm(np.hstack([Ta, Tb]))
    points.append(QuiverPoint("operator_argument",
                              {"alpha": Ta * s, "beta": Tb * s}))
    X.append({"a": rng.standard_normal((2, 2)) + 0j,
              "b": rng.standard_normal((2, 1)) + 0j})
    Y.append({"a": 0.3 * (rng.standard_normal((2, 2)) + 0j),
              "b": 0.3 * (rng.standard_normal((2, 1)) + 0j)})
rep = qv.pick_qltoa(G, xd, points, X, Y)
print("QLTOA Pick is", rep.pick.shape, "| feasible:", rep.feasible)

blk = rep.pick[:4, :4]
print("cross-vertex blocks are structural zeros:",
      np.max(np.abs(blk[:2, 2:])) == 0.0)

# the constant corner is decided by a Douglas-factorization lemma: a single
# scalar |delta| <= 1 with delta X_i = Y_i exists iff a basis-indexed matrix
# is PSD
res = qv.constant_multiplier_check([X[i]["b"] for i in range(N)],
                                   [Y[i]["b"] for i in range(N)])
print("constant corner solvable:", res.verdict.is_psd, "delta =", res.delta)

# --- the multiplier-norm picture ---------------------------------------------
# Elements of this algebra are (V, W, B0) triples; their norm is the norm of
# the two-by-two multiplication operator, approached from below by Toeplitz
# truncations.
V = [[[0.4]], [[0.3]]]   # V(lam) = 0.4 + 0.3 lam
W = [[[0.0]], [[0.2]]]
B0 = [[0.5]]
for L in (1, 3, 8, 16):
    print("  truncation L=%2d -> norm %.6f"
          % (L, qv.two_vertex_toeplitz_norm(V, W, B0, L)))
