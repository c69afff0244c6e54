"""Pick criteria on the commutative and noncommutative unit ball.

Free words over d letters index the noncommutative Toeplitz algebra; points
are operator d-tuples whose block row is a strict contraction.  Pick blocks
are geometric word sums computed by the level recursion
M_{n+1} = sum_k Z_k^(i) M_n Z_k^(j)* with certified geometric tails.  The
commutative (Drury-Arveson) criteria reuse the word sum, which equals the
multinomial-weighted multi-index sum; the literal unweighted multi-index sum
is available behind a flag for comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import config, matcore
from .matcore import plan_levels
from .errors import ArgumentError, BudgetError, DimensionError, DomainError
from .matcore import as_complex_matrix
from .reports import FeasibilityReport, make_report

Word = Tuple[int, ...]


def words_up_to(d: int, max_length: int, budget: Optional[int] = None) -> List[Word]:
    """All words over {1..d} of length <= max_length, length-then-lex ordered."""
    if d < 1:
        raise ArgumentError("alphabet size must be >= 1")
    if max_length < 0:
        raise ArgumentError("max_length must be >= 0")
    budget = config.work_budget() if budget is None else budget
    count = max_length + 1 if d == 1 else (d ** (max_length + 1) - 1) // (d - 1)
    if count > budget:
        raise BudgetError(f"word enumeration would produce {count} words",
                          achieved_bound=count)
    out: List[Word] = []
    for n in range(max_length + 1):
        out.extend(itertools.product(range(1, d + 1), repeat=n))
    return out


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """d square matrices of a common dimension; a noncommutative ball point."""

    mats: Tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(as_complex_matrix(M) for M in self.mats)
        if not mats:
            raise ArgumentError("operator tuple must have at least one entry")
        n = mats[0].shape[0]
        for M in mats:
            if M.shape != (n, n):
                raise DimensionError(
                    f"tuple entries must be square of one dimension, got {M.shape}")
        object.__setattr__(self, "mats", mats)
        object.__setattr__(
            self, "row_norm", matcore.operator_norm(np.hstack(mats)))

    row_norm: float = 0.0

    @property
    def d(self) -> int:
        return len(self.mats)

    @property
    def dim(self) -> int:
        return self.mats[0].shape[0]

    def commutator_defect(self) -> float:
        worst = 0.0
        for a, b in itertools.combinations(self.mats, 2):
            worst = max(worst, matcore.operator_norm(a @ b - b @ a))
        return worst

    def is_commutative(self, tol: float = 1e-12) -> bool:
        return self.commutator_defect() <= tol

    def adjoint(self) -> "OperatorTuple":
        return OperatorTuple(tuple(M.conj().T for M in self.mats))


def as_operator_tuple(Z) -> OperatorTuple:
    if isinstance(Z, OperatorTuple):
        return Z
    return OperatorTuple(tuple(as_complex_matrix(M) for M in Z))


def word_power(Z, word: Word, transpose: bool = False) -> np.ndarray:
    """Z^gamma = Z_{i_N} ... Z_{i_1} for gamma = (i_N, ..., i_1) as written.

    With transpose=True the letters multiply in reversed (transposed-word)
    order Z_{i_1} ... Z_{i_N}.
    """
    Z = as_operator_tuple(Z)
    for k in word:
        if not 1 <= k <= Z.d:
            raise ArgumentError(f"letter {k} outside alphabet 1..{Z.d}")
    M = np.eye(Z.dim, dtype=np.complex128)
    letters = tuple(reversed(word)) if transpose else word
    for k in letters:
        M = M @ Z.mats[k - 1]
    return M


def _check_strict_row(tuples) -> List[OperatorTuple]:
    out = []
    for k, Z in enumerate(tuples):
        Z = as_operator_tuple(Z)
        if Z.row_norm >= 1.0:
            raise DomainError(
                f"tuple {k} has block-row norm {Z.row_norm:.6g} >= 1")
        out.append(Z)
    return out


def _word_sum_block(Zi: OperatorTuple, Zj: OperatorTuple, M0: np.ndarray,
                    levels: int) -> np.ndarray:
    """sum over words up to the given level of Z_i^g M0 Z_j^g* (recursion)."""
    acc = M0.astype(np.complex128, copy=True)
    cur = M0.astype(np.complex128, copy=True)
    for _ in range(levels):
        cur = sum(Zi.mats[k] @ cur @ Zj.mats[k].conj().T for k in range(Zi.d))
        acc += cur
    return acc


def pick_nc_ltoa(operator_points, directions, targets, tol="auto",
                 series_tol=1e-12, budget: Optional[int] = None) -> FeasibilityReport:
    """Pick matrix [sum_g Z_i^g (X_i X_j* - Y_i Y_j*) Z_j^g*] over free words."""
    budget = config.work_budget() if budget is None else budget
    Zs = _check_strict_row(operator_points)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = len(Zs)
    if not (len(X) == len(Y) == N):
        raise DimensionError("need one direction and one target per point")
    for i in range(N):
        if X[i].shape[0] != Zs[i].dim or Y[i].shape[0] != Zs[i].dim:
            raise DimensionError(
                f"condition {i}: directions/targets must map into the tuple space")
    middles = [[X[i] @ X[j].conj().T - Y[i] @ Y[j].conj().T for j in range(N)]
               for i in range(N)]
    entries = [(Zs[i].row_norm * Zs[j].row_norm,
                matcore.operator_norm(middles[i][j]))
               for i in range(N) for j in range(N)]
    levels, tail_list = plan_levels(entries, Zs[0].d, series_tol, budget)
    blocks = [[_word_sum_block(Zs[i], Zs[j], middles[i][j], levels[i * N + j])
               for j in range(N)] for i in range(N)]
    tails = np.array(tail_list).reshape(N, N)
    pick = np.block(blocks)
    method = "closed_form" if tails.max() == 0 else "truncated_series"
    return make_report(pick, method, float(np.linalg.norm(tails, 2)), tol)


def _check_ball_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.complex128)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    norms2 = np.sum(np.abs(pts) ** 2, axis=1)
    if np.any(norms2 >= 1.0):
        raise DomainError(
            f"point with squared norm {norms2.max():.6g} lies outside the ball")
    return pts


def pick_da_fov(points, values, tol="auto") -> FeasibilityReport:
    """Pick matrix [(I - W_i W_j*) / (1 - <lam_i, lam_j>)] on the ball."""
    pts = _check_ball_points(points)
    W = [as_complex_matrix(M) for M in values]
    if len(W) != pts.shape[0]:
        raise DimensionError("need one value per point")
    p = W[0].shape[0]
    if any(M.shape != W[0].shape for M in W):
        raise DimensionError("values must share one shape")
    eye = np.eye(p, dtype=np.complex128)
    N = pts.shape[0]
    blocks = [[(eye - W[i] @ W[j].conj().T)
               / (1.0 - np.vdot(pts[j], pts[i]))
               for j in range(N)] for i in range(N)]
    return make_report(np.block(blocks), "closed_form", 0.0, tol)


def pick_da_lt(points, directions, targets, tol="auto") -> FeasibilityReport:
    """Pick matrix [(X_i X_j* - Y_i Y_j*) / (1 - <lam_i, lam_j>)] on the ball."""
    pts = _check_ball_points(points)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = pts.shape[0]
    if not (len(X) == len(Y) == N):
        raise DimensionError("need one direction and one target per point")
    blocks = [[(X[i] @ X[j].conj().T - Y[i] @ Y[j].conj().T)
               / (1.0 - np.vdot(pts[j], pts[i]))
               for j in range(N)] for i in range(N)]
    return make_report(np.block(blocks), "closed_form", 0.0, tol)


def pick_da_ltoa(operator_points, directions, targets, tol="auto",
                 series_tol=1e-12, budget: Optional[int] = None,
                 literal_unweighted: bool = False,
                 commutativity_tol: float = 1e-12) -> FeasibilityReport:
    """Drury-Arveson operator-argument Pick matrix for commuting tuples.

    Computed as the free word sum, equivalently the multi-index sum with
    multinomial weights |n|!/n! (the weights reproduce the kernel
    1/(1 - <lam, zeta>) under scalar reduction).  literal_unweighted=True
    instead computes the plain sum over multi-indices.
    """
    budget = config.work_budget() if budget is None else budget
    Zs = _check_strict_row(operator_points)
    for k, Z in enumerate(Zs):
        defect = Z.commutator_defect()
        if defect > commutativity_tol:
            raise DomainError(
                f"tuple {k} is not commutative (commutator norm {defect:.3g})")
    if not literal_unweighted:
        return pick_nc_ltoa(Zs, directions, targets, tol, series_tol, budget)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = len(Zs)
    blocks = [[None] * N for _ in range(N)]
    tails = np.zeros((N, N))
    for i in range(N):
        for j in range(N):
            M0 = X[i] @ X[j].conj().T - Y[i] @ Y[j].conj().T
            blocks[i][j], tails[i, j] = _unweighted_multi_index_sum(
                Zs[i], Zs[j], M0, series_tol, budget)
    pick = np.block(blocks)
    method = "closed_form" if tails.max() == 0 else "truncated_series"
    return make_report(pick, method, float(np.linalg.norm(tails, 2)), tol)


def _unweighted_multi_index_sum(Zi, Zj, M0, series_tol, budget):
    """sum over n in Z_+^d (coefficient 1) of Z_i^n M0 Z_j^n*."""
    d = Zi.d
    norm0 = matcore.operator_norm(M0)
    if norm0 == 0.0:
        return np.zeros_like(M0), 0.0
    r = Zi.row_norm * Zj.row_norm
    acc = M0.astype(np.complex128, copy=True)
    level = {(0,) * d: M0.astype(np.complex128, copy=True)}
    m = 0
    work = 0
    while True:
        # tail bound: sum_{m' > m} C(m'+d-1, d-1) r^m' norm0, via ratio test
        q = r * (m + d) / (m + 1)
        if q < 1.0:
            head = math.comb(m + d, d - 1) * r ** (m + 1) * norm0
            tail = head / (1.0 - q)
            if tail <= series_tol:
                return acc, tail
        nxt = {}
        for n in itertools.combinations_with_replacement(range(d), m + 1):
            counts = [0] * d
            for k in n:
                counts[k] += 1
            idx = tuple(counts)
            k = next(p for p, c in enumerate(counts) if c > 0)
            prev = tuple(c - (1 if p == k else 0) for p, c in enumerate(counts))
            P = Zi.mats[k] @ level[prev] @ Zj.mats[k].conj().T
            nxt[idx] = P
            acc += P
            work += 1
            if work > budget:
                raise BudgetError(
                    "unweighted multi-index sum exceeded the work budget",
                    achieved_bound=math.comb(m + d, d - 1) * r ** (m + 1) * norm0)
        level = nxt
        m += 1


def pick_nc_frd(operator_points, values, basis_dim: Optional[int] = None,
                tol="auto", series_tol=1e-12,
                budget: Optional[int] = None) -> FeasibilityReport:
    """Free-ball Pick matrix for transposed functional-calculus interpolation.

    Blocks over ((i, i'), (j, j')) are word sums of
    Z_i^g (e_i' e_j'* - W_i e_i' e_j'* W_j*) Z_j^g*.
    """
    Zs = _check_strict_row(operator_points)
    W = [as_complex_matrix(M) for M in values]
    if len(W) != len(Zs):
        raise DimensionError("need one value per point")
    dim = Zs[0].dim
    for Z, Wi in zip(Zs, W):
        if Z.dim != dim or Wi.shape != (dim, dim):
            raise DimensionError("values and tuples must share one square dimension")
    kappa = basis_dim or dim
    if kappa != dim:
        raise DimensionError("basis dimension must equal the tuple space dimension")
    eye = np.eye(dim, dtype=np.complex128)
    ex_points, ex_dirs, ex_targets = [], [], []
    for Z, Wi in zip(Zs, W):
        for k in range(kappa):
            ex_points.append(Z)
            ex_dirs.append(eye[:, k:k + 1])
            ex_targets.append(Wi @ eye[:, k:k + 1])
    return pick_nc_ltoa(ex_points, ex_dirs, ex_targets, tol, series_tol, budget)


def pick_nc_frd_star(operator_points, values, basis_dim: Optional[int] = None,
                     tol="auto", series_tol=1e-12,
                     budget: Optional[int] = None) -> FeasibilityReport:
    """Free-ball Pick matrix for plain functional-calculus interpolation.

    Blocks are word sums of Z_i^g* (e e* - W_i* e e* W_j) Z_j^g; computed by
    the conjugation reduction, i.e. as pick_nc_frd on the adjoint tuples and
    adjoint values.
    """
    Zs = [as_operator_tuple(Z).adjoint() for Z in operator_points]
    W = [as_complex_matrix(M).conj().T for M in values]
    return pick_nc_frd(Zs, W, basis_dim, tol, series_tol, budget)
