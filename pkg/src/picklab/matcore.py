"""Dense complex linear algebra kernels.

Hermitian eigenvalues and PSD verdicts, operator norms, and the Stein /
Lyapunov solvers that sum the geometric operator series behind every
operator-argument Pick matrix.  All functions are pure; matrices are numpy
complex arrays, and Hermitian outputs are always symmetrized explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArgumentError,
    BudgetError,
    DimensionError,
    DivergenceError,
    NumericError,
    RegularityError,
)

# Largest vec-dimension for which the Stein equation is solved by dense
# Kronecker vectorization; larger problems fall back to certified series.
STEIN_VEC_CAP = 4096

_EPS = np.finfo(np.float64).eps


def as_complex_matrix(M) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={A.ndim}")
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(A.imag))):
        raise DimensionError("matrix entries must be finite")
    return A


def _require_square(A: np.ndarray, what: str = "matrix") -> np.ndarray:
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {A.shape}")
    return A


def hermitize(M) -> np.ndarray:
    """(M + M*)/2.  Idempotent on Hermitian input."""
    A = _require_square(as_complex_matrix(M))
    return (A + A.conj().T) / 2.0


def min_eigenvalue(H) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    A = hermitize(H)
    if A.shape[0] == 0:
        raise DimensionError("empty matrix has no eigenvalues")
    try:
        return float(np.linalg.eigvalsh(A)[0])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NumericError(f"Hermitian eigensolver failed to converge: {exc}")


def operator_norm(M) -> float:
    """Largest singular value."""
    A = as_complex_matrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def spectral_radius(M) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    A = _require_square(as_complex_matrix(M))
    if A.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float


def auto_tolerance(H: np.ndarray) -> float:
    """Backward-error PSD tolerance: dim * eps * spectral norm."""
    return H.shape[0] * _EPS * operator_norm(H)


def is_psd(H, tol="auto") -> PsdVerdict:
    """PSD verdict for a Hermitian matrix at the given tolerance."""
    A = hermitize(H)
    if tol == "auto":
        tol = auto_tolerance(A)
    tol = float(tol)
    if tol < 0:
        raise ArgumentError("tolerance must be nonnegative")
    lam = min_eigenvalue(A)
    return PsdVerdict(is_psd=bool(lam >= -tol), min_eigenvalue=lam, tolerance_used=tol)


def stein_series(A, Q, B, terms: int) -> np.ndarray:
    """Truncated series sum_{n=0}^{terms} A^n Q B*^n (independent oracle)."""
    A = as_complex_matrix(A)
    B = as_complex_matrix(B)
    Q = as_complex_matrix(Q)
    P = Q.copy()
    term = Q.copy()
    Bh = B.conj().T
    for _ in range(terms):
        term = A @ term @ Bh
        P += term
    return P


def stein_tail_bound(A, Q, B, terms: int) -> float:
    """Geometric bound on the dropped tail of :func:`stein_series`."""
    r = spectral_radius(as_complex_matrix(A)) * spectral_radius(as_complex_matrix(B))
    if r >= 1.0:
        raise DivergenceError(f"spectral-radius product {r:.6g} >= 1")
    # ||A^n Q B*^n|| <= C r^n eventually; at desk scale the crude bound with
    # operator norms is adequate since the solvers only use it when the
    # vec-dimension cap forces series summation.
    na = operator_norm(A)
    nb = operator_norm(B)
    s = na * nb
    if s < 1.0:
        return operator_norm(Q) * s ** (terms + 1) / (1.0 - s)
    # Fall back on the spectral bound with a non-normality safety factor from
    # the actual last computed term.
    last = Q
    Bh = as_complex_matrix(B).conj().T
    for _ in range(terms + 1):
        last = as_complex_matrix(A) @ last @ Bh
    return operator_norm(last) / (1.0 - r)


def solve_stein(A, Q, B):
    """Solve P - A P B* = Q, i.e. P = sum_n A^n Q B*^n.

    Requires spectral_radius(A) * spectral_radius(B) < 1.  Solved by dense
    Kronecker vectorization up to vec-size ``STEIN_VEC_CAP``; beyond that by
    truncated series with a certified geometric tail below 1e-14 * ||Q||.
    """
    P, _method, _tail = solve_stein_report(A, Q, B)
    return P


def solve_stein_report(A, Q, B):
    """Like :func:`solve_stein` but also reports (method, tail_bound)."""
    A = _require_square(as_complex_matrix(A), "A")
    B = _require_square(as_complex_matrix(B), "B")
    Q = as_complex_matrix(Q)
    if Q.shape != (A.shape[0], B.shape[0]):
        raise DimensionError(
            f"Q shape {Q.shape} does not conform to A {A.shape}, B {B.shape}"
        )
    ra = spectral_radius(A)
    rb = spectral_radius(B)
    r = ra * rb
    if r >= 1.0:
        raise DivergenceError(
            f"spectral-radius product {r:.6g} >= 1; the Stein series diverges"
        )
    vec_size = Q.size
    if vec_size <= STEIN_VEC_CAP:
        # Row-major vec: vec(A P B*) = (A kron conj(B)) vec(P).
        n = vec_size
        K = np.eye(n, dtype=np.complex128) - np.kron(A, B.conj())
        try:
            vecP = np.linalg.solve(K, Q.reshape(-1))
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"Stein system singular to working precision: {exc}")
        return vecP.reshape(Q.shape), "stein_solve", 0.0
    # Series fallback: pick L so the geometric tail is negligible.
    qnorm = operator_norm(Q)
    if qnorm == 0.0:
        return np.zeros_like(Q), "truncated_series", 0.0
    target = 1e-14
    s = max(min(operator_norm(A) * operator_norm(B), 1.0 - 1e-9), r)
    L = int(np.ceil(np.log(target * (1.0 - s)) / np.log(s))) if s > 0 else 0
    L = max(L, 8)
    P = stein_series(A, Q, B, L)
    return P, "truncated_series", stein_tail_bound(A, Q, B, L)


def required_levels(r: float, norm0: float, series_tol: float) -> int:
    """Smallest L with geometric tail norm0 * r^(L+1) / (1-r) <= series_tol."""
    if norm0 == 0.0 or r == 0.0:
        return 0
    return max(0, int(math.ceil(math.log(series_tol * (1.0 - r) / norm0)
                                / math.log(r))))


def plan_levels(entries, per_level_cost: int, series_tol: float, budget: int):
    """Choose truncation levels for a family of geometric sums at once.

    entries is a list of (ratio, norm0) pairs; the whole family must fit in
    the per-dataset work budget, measured in matrix multiplications.  On
    overflow the BudgetError carries the tail achievable with the budget
    spread evenly over the family.
    """
    levels = [required_levels(r, n, series_tol) for r, n in entries]
    cost = per_level_cost * sum(L + 1 for L in levels)
    if cost > budget:
        per_entry = max(budget // (max(len(entries), 1) * max(per_level_cost, 1))
                        - 1, 0)
        achieved = max(
            (n * r ** (per_entry + 1) / (1.0 - r)
             for r, n in entries if 0.0 < r < 1.0 and n > 0.0),
            default=0.0)
        raise BudgetError(
            f"series truncation needs {cost} multiplications, over budget "
            f"{budget}", achieved_bound=achieved)
    tails = [n * r ** (L + 1) / (1.0 - r) if 0.0 < r < 1.0 and n > 0.0 else 0.0
             for (r, n), L in zip(entries, levels)]
    return levels, tails


def lyapunov_regularity_margin(Z) -> tuple[float, tuple[complex, complex]]:
    """min |lam_i + conj(lam_j)| over eigenvalue pairs, with the argmin pair."""
    Z = _require_square(as_complex_matrix(Z))
    lam = np.linalg.eigvals(Z)
    S = np.abs(lam[:, None] + lam[None, :].conj())
    i, j = np.unravel_index(np.argmin(S), S.shape)
    return float(S[i, j]), (complex(lam[i]), complex(lam[j]))


def solve_lyapunov_rhp(Z, Q):
    """Solve P Z* + Z P = Q.

    Z must be Lyapunov regular: no eigenvalue pair with lam + conj(mu) = 0.
    The result is hermitized when Q is Hermitian (the exact solution is).
    """
    Z = _require_square(as_complex_matrix(Z), "Z")
    Q = as_complex_matrix(Q)
    if Q.shape != Z.shape:
        raise DimensionError(f"Q shape {Q.shape} does not match Z {Z.shape}")
    margin, pair = lyapunov_regularity_margin(Z)
    scale = max(spectral_radius(Z), 1.0)
    if margin <= 1e-12 * scale:
        raise RegularityError(
            f"Z is Lyapunov-singular: eigenvalues {pair[0]:.6g} and {pair[1]:.6g} "
            f"satisfy lam + conj(mu) ~ 0 (margin {margin:.3g})",
            eigenvalue_pair=pair,
        )
    n = Z.shape[0]
    # Row-major vec: vec(Z P) = (Z kron I) vec(P), vec(P Z*) = (I kron conj(Z)) vec(P).
    K = np.kron(Z, np.eye(n)) + np.kron(np.eye(n), Z.conj())
    vecP = np.linalg.solve(K, Q.reshape(-1))
    P = vecP.reshape(Z.shape)
    if np.allclose(Q, Q.conj().T, rtol=0.0, atol=1e-13 * max(operator_norm(Q), 1.0)):
        P = hermitize(P)
    return P
