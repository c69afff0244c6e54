"""The unit ball, commutative and free.

In several variables the disk becomes a ball and Taylor indices become
words over d letters.  Pick blocks are word sums
sum_g Z_i^g M Z_j^g*, computed by a level recursion with a certified
geometric tail.  For commuting arguments the word sum collapses to a
multinomial-weighted multi-index sum that reproduces the Drury-Arveson
kernel 1/(1 - <lam, zeta>); the unweighted multi-index sum instead yields
the polydisk product kernel, and both are available for comparison.
"""

import numpy as np

from picklab import ball, matcore

rng = np.random.default_rng(11)

# --- free words -----------------------------------------------------------
print("words over 2 letters, length <= 2:", ball.words_up_to(2, 2))

# word powers multiply in written order; transposition reverses it
Z = [rng.standard_normal((2, 2)) + 0j for _ in range(2)]
Z = [M * (0.6 / matcore.operator_norm(np.hstack(Z))) for M in Z]
print("Z^(21) == Z_2 Z_1:",
      np.allclose(ball.word_power(Z, (2, 1)), Z[1] @ Z[0]))

# --- the scalar sanity check ----------------------------------------------
# At the commuting scalar point z = (1/2, 1/2) with X = 1, Y = 0 the word
# sum is the geometric series 1/(1 - 1/4 - 1/4) = 2.
rep = ball.pick_nc_ltoa([[np.array([[0.5]]), np.array([[0.5]])]],
                        [np.array([[1.0]])], [np.array([[0.0]])])
print("word sum at z=(1/2,1/2):", rep.pick[0, 0].real, "(expect 2)")

# --- Drury-Arveson points ---------------------------------------------------
pts = np.array([[0.0, 0.0], [0.5, 0.5]])
rep = ball.pick_da_fov(pts, [[[0.0]], [[0.5]]])
print("DA two-point Pick:", rep.pick.real.tolist(), "feasible:", rep.feasible)

# --- weighted vs literal sums ----------------------------------------------
# For diagonal scalar tuples the word sum reproduces the DA kernel; the
# literal (unweighted) multi-index sum gives the polydisk kernel instead.
lam = np.array([0.3, 0.4])
tup = [[lam[0] * np.eye(1), lam[1] * np.eye(1)]]
X, Y = [np.eye(1)], [np.zeros((1, 1))]
word = ball.pick_da_ltoa(tup, X, Y).pick[0, 0].real
literal = ball.pick_da_ltoa(tup, X, Y, literal_unweighted=True).pick[0, 0].real
print("weighted sum  = %.6f, DA kernel       = %.6f"
      % (word, 1 / (1 - 0.09 - 0.16)))
print("literal sum   = %.6f, polydisk kernel = %.6f"
      % (literal, 1 / ((1 - 0.09) * (1 - 0.16))))

# --- tails are certified ----------------------------------------------------
Zs = [[M * 0.95 / 0.6 * 0.6 for M in Z] for _ in range(2)]
X = [rng.standard_normal((2, 2)) + 0j for _ in range(2)]
Y = [0.2 * (rng.standard_normal((2, 2)) + 0j) for _ in range(2)]
loose = ball.pick_nc_ltoa(Zs, X, Y, series_tol=1e-4)
tight = ball.pick_nc_ltoa(Zs, X, Y, series_tol=1e-13)
drift = np.max(np.abs(loose.pick - tight.pick))
print("loose truncation moved blocks by %.2e <= reported tail %.2e"
      % (drift, loose.tail_bound))
