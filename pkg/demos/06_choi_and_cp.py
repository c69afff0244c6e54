"""Complete positivity and the Choi matrix route to Pick criteria.

A linear map on a matrix algebra is completely positive exactly when the
block matrix of its unit images [phi(e_ij)] is PSD (Choi).  Several
interpolation criteria arise as complete positivity of a concrete map, and
their Choi matrices reproduce the corresponding Pick matrices after an
index permutation -- computing both sides makes that visible.
"""

import numpy as np

from picklab import cp, disk, matcore
from picklab import quiver as qv
from picklab.cp import LinearMapOnMatrices
from picklab.quiver import Grading, QuiverPoint

rng = np.random.default_rng(21)

# --- the textbook trio -----------------------------------------------------
ident = LinearMapOnMatrices.from_callable(lambda A: A, 2)
transp = LinearMapOnMatrices.from_callable(lambda A: A.T, 2)
V = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
sandwich = LinearMapOnMatrices.from_callable(lambda A: V @ A @ V.conj().T, 2)
print("identity  Choi eigs:", np.round(np.linalg.eigvalsh(cp.choi_matrix(ident)), 6))
print("transpose Choi eigs:", np.round(np.linalg.eigvalsh(cp.choi_matrix(transp)), 6))
verdict = cp.cp_check(transp)
print("transpose is CP:", verdict.is_cp,
      "| witness found at amplification level", verdict.witness["level"])
print("V.V* is CP:", cp.cp_check(sandwich).is_cp)

# --- a Pick matrix hiding inside a Choi matrix ------------------------------
# The tangential disk criterion is complete positivity of a map built from
# Stein sums; compressing its Choi matrix onto matching condition pairs
# recovers the Pick matrix exactly.
lams = [0.2 + 0.1j, -0.4]
X = [rng.standard_normal((2, 2)) + 0j for _ in range(2)]
Y = [0.4 * (rng.standard_normal((2, 2)) + 0j) for _ in range(2)]
phi = cp.build_phi_disk([[[l]] for l in lams], X, Y)
compressed, leak = cp.condition_compression(phi, 2)
pick = disk.pick_lt(lams, X, Y)
print("\ncompressed Choi == tangential Pick:",
      np.max(np.abs(compressed - pick.pick)) < 1e-12, "| leakage:", leak)
print("CP verdict == Pick verdict:",
      cp.cp_check(phi).is_cp == pick.verdict.is_psd)

# the adjoint-side map phi* tests the same thing by trace duality; it lives
# on matrix arguments, so move to genuinely 2x2 operator points
Z2 = []
for _ in range(2):
    M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Z2.append(M * (0.4 / matcore.operator_norm(M)))
phi_m = cp.build_phi_disk(Z2, X, Y)
phi_star = cp.build_phi_star_disk(Z2, X, Y)
print("phi and phi* verdicts agree:",
      cp.cp_check(phi_m).is_cp == cp.cp_check(phi_star).is_cp)

# --- quivers: one Choi matrix, one Pick matrix per vertex --------------------
G, _, _ = qv.two_vertex_example()
zd = Grading(G, {"a": 2, "b": 1})
vd = Grading(G, {"a": 1, "b": 1})
edim = sum(vd[v] * zd[v] for v in G.vertices)
pts, Xq, Yq = [], [], []
for _ in range(2):
    Za = rng.standard_normal((2, 2)) + 0j
    Za *= 0.5 / matcore.operator_norm(Za)
    Zb = rng.standard_normal((1, 2)) + 0j
    Zb *= 0.5 / matcore.operator_norm(Zb)
    pts.append(QuiverPoint("tensor", {"alpha": Za, "beta": Zb}))
    Xq.append(rng.standard_normal((2, edim)) + 0j)
    Yq.append(0.4 * (rng.standard_normal((2, edim)) + 0j))
phib = cp.build_phi_bar_quiver(G, zd, vd, pts, Xq, Yq)
choi, leak = cp.condition_compression(phib, 2)
picks = qv.pick_qltt(G, zd, vd, pts, Xq, Yq)
sizes = {v: picks[v].pick.shape[0] for v in G.vertices}
print("\nquiver Choi matrix splits into per-vertex Pick matrices of sizes",
      sizes, "| leakage:", leak)
print("verdict: CP(phi_bar) == all vertex Picks PSD:",
      cp.cp_check(phib).is_cp == all(p.feasible for p in picks.values()))
