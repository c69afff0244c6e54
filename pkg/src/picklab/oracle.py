"""Sampling oracle for certified Schur-class elements.

Samples carry finitely many Taylor/word/path coefficients together with a
certified bound on the true multiplier norm, so that data generated by the
evaluation routines below is guaranteed to be interpolated by an actual
Schur-class element.  This is the brute-force necessity oracle for every
Pick criterion: data produced here must always yield PSD Pick matrices (up
to reported tails).

Certification routes
  disk polynomials   sup-norm on the circle via a fine grid plus a Lipschitz
                     correction (the multiplier norm equals the sup norm)
  Blaschke products  inner functions have multiplier norm exactly |c|
  ball / quiver      triangle inequality over homogeneous levels; creation
                     operators of a fixed level have orthogonal ranges, so
                     a degree-n homogeneous part has multiplier norm
                     max_v || sum_g S_g* S_g ||^(1/2) exactly
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from . import ball as ball_mod
from . import matcore
from . import quiver as quiver_mod
from .errors import ArgumentError, DomainError, ShapeError
from .matcore import as_complex_matrix
from .quiver import Grading, Quiver

_BLASCHKE_ORDER = 64
_BLASCHKE_INTERNAL = 2048


@dataclass(eq=False)
class SchurSample:
    """Finitely supported Schur-class element with a contractivity certificate.

    setting         "disk" | "ball" | "quiver"
    coefficients    disk: {n: matrix}; ball: {word: matrix}; quiver: {Path: matrix}
    norm_bound      certified upper bound on the true multiplier norm (<= 1)
    contractivity_margin   1 - norm_bound, in (0, 1]
    tail_bound      l1 bound on dropped coefficients (Blaschke truncation)
    scale           factor applied to raw coefficients during certification
    """

    setting: str
    coefficients: Dict
    norm_bound: float
    tail_bound: float = 0.0
    scale: float = 1.0
    d: Optional[int] = None
    quiver: Optional[Quiver] = None
    in_dims: Optional[Grading] = None
    out_dims: Optional[Grading] = None
    shape: Optional[Tuple[int, int]] = None

    @property
    def contractivity_margin(self) -> float:
        return max(1.0 - self.norm_bound, 0.0)

    def degree(self) -> int:
        if not self.coefficients:
            return 0
        if self.setting == "disk":
            return max(self.coefficients)
        if self.setting == "ball":
            return max(len(w) for w in self.coefficients)
        return max(p.length for p in self.coefficients)


def _seed_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def disk_sup_norm_bound(coefficients: Dict[int, np.ndarray], grid: int = 4096) -> float:
    """Certified upper bound on max_{|z|=1} ||S(z)|| for a matrix polynomial.

    Grid maximum plus a Lipschitz correction sum_n n ||S_n|| * (pi / grid),
    which dominates the derivative of theta -> ||S(e^(i theta))||.
    """
    if not coefficients:
        return 0.0
    ns = np.array(sorted(coefficients))
    stack = np.stack([coefficients[n] for n in ns])
    theta = 2 * np.pi * np.arange(grid) / grid
    powers = np.exp(1j * np.outer(theta, ns))
    vals = np.tensordot(powers, stack, axes=(1, 0))
    best = float(np.linalg.svd(vals, compute_uv=False)[:, 0].max())
    lipschitz = sum(n * matcore.operator_norm(C) for n, C in coefficients.items())
    return best + lipschitz * np.pi / grid


def free_norm_bound(sample_coeffs, level_of, source_of) -> float:
    """Upper bound sum_n max_v || sum_{level n, source v} S_g* S_g ||^(1/2).

    Within one homogeneous level the creation operators have orthogonal
    ranges, so each level's multiplier norm is the max over source vertices
    of the Gram-sum norm; summing levels is the triangle inequality.
    """
    by_level: Dict[int, Dict] = {}
    for key, C in sample_coeffs.items():
        by_level.setdefault(level_of(key), {}).setdefault(source_of(key), []).append(C)
    bound = 0.0
    for _, groups in sorted(by_level.items()):
        worst = 0.0
        for mats in groups.values():
            gram = sum(C.conj().T @ C for C in mats)
            worst = max(worst, math.sqrt(matcore.operator_norm(gram)))
        bound += worst
    return bound


def _blaschke_coefficients(zeros, c, length):
    """Ascending Taylor coefficients of c * prod (z - a)/(1 - conj(a) z)."""
    series = np.zeros(length, dtype=np.complex128)
    series[0] = c
    for a in zeros:
        geo = np.conj(a) ** np.arange(length)
        inv = geo  # 1/(1 - conj(a) z)
        num = np.zeros(length, dtype=np.complex128)
        num[0] = -a
        num[1] = 1.0
        factor = np.convolve(num, inv)[:length]
        series = np.convolve(series, factor)[:length]
    return series


def sample_blaschke(degree: int, seed, order: int = _BLASCHKE_ORDER) -> SchurSample:
    """Random finite Blaschke product, truncated to `order` Taylor terms.

    Zeros satisfy |a_k| <= 0.9 and the front factor |c| lies in [0.9, 0.99],
    so the true multiplier norm is exactly |c| and the stored truncation
    carries a certified l1 tail bound.
    """
    if degree < 0:
        raise ArgumentError("degree must be >= 0")
    rng = _seed_rng(seed)
    radii = 0.9 * np.sqrt(rng.uniform(0, 1, size=degree))
    angles = rng.uniform(0, 2 * np.pi, size=degree)
    zeros = radii * np.exp(1j * angles)
    c = rng.uniform(0.9, 0.99) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return blaschke_from_zeros(zeros, c, order)


def blaschke_from_zeros(zeros, c, order: int = _BLASCHKE_ORDER) -> SchurSample:
    """Blaschke product with explicit zeros and front factor (|c| <= 1)."""
    zeros = np.asarray(zeros, dtype=np.complex128).reshape(-1)
    if np.any(np.abs(zeros) > 0.9):
        raise DomainError("Blaschke zeros must satisfy |a| <= 0.9")
    if abs(c) > 1.0:
        raise DomainError("front factor must satisfy |c| <= 1")
    full = _blaschke_coefficients(zeros, c, _BLASCHKE_INTERNAL)
    tail = float(np.sum(np.abs(full[order + 1:])))
    # remainder beyond the internal window: |b_n| <~ 0.9^n, utterly negligible
    tail += 1e-40
    coeffs = {n: np.array([[full[n]]]) for n in range(order + 1)}
    return SchurSample(
        setting="disk", coefficients=coeffs, norm_bound=min(abs(c), 1.0),
        tail_bound=tail, scale=1.0, shape=(1, 1))


def sample_contractive_poly(p: int, q: int, degree: int, kind: str, seed,
                            d: Optional[int] = None,
                            quiver: Optional[Quiver] = None,
                            in_dims=None, out_dims=None,
                            target: float = 0.95) -> SchurSample:
    """Random polynomial coefficients scaled to a certified norm bound.

    kind "disk" draws p x q Taylor coefficients S_0..S_degree; kind "ball"
    draws a coefficient for every word of length <= degree over d letters;
    kind "quiver" draws one per path, shaped by the vertex gradings.  The
    coefficients are scaled so the certified bound on the true multiplier
    norm equals `target` (default 0.95); the truncated Toeplitz norm is then
    at most `target` as well.
    """
    if not 0 < target < 1:
        raise ArgumentError("target must lie in (0, 1)")
    rng = _seed_rng(seed)
    if kind == "disk":
        coeffs = {n: _complex_gaussian(rng, (p, q)) for n in range(degree + 1)}
        bound = disk_sup_norm_bound(coeffs)
        scale = target / bound if bound > 0 else 1.0
        coeffs = {n: scale * C for n, C in coeffs.items()}
        return SchurSample("disk", coeffs, norm_bound=target, scale=scale,
                           shape=(p, q))
    if kind == "ball":
        if d is None or d < 1:
            raise ArgumentError("ball kind needs the alphabet size d")
        if degree > 8:
            raise ArgumentError("ball samples are capped at degree 8")
        words = ball_mod.words_up_to(d, degree)
        coeffs = {w: _complex_gaussian(rng, (p, q)) for w in words}
        bound = free_norm_bound(coeffs, level_of=len, source_of=lambda w: 0)
        scale = target / bound if bound > 0 else 1.0
        coeffs = {w: scale * C for w, C in coeffs.items()}
        return SchurSample("ball", coeffs, norm_bound=target, scale=scale,
                           d=d, shape=(p, q))
    if kind == "quiver":
        if quiver is None or in_dims is None or out_dims is None:
            raise ArgumentError("quiver kind needs the quiver and both gradings")
        if degree > 8:
            raise ArgumentError("quiver samples are capped at degree 8")
        if set(in_dims.dims) != set(out_dims.dims):
            raise ShapeError("gradings must cover the same vertex set")
        paths = quiver_mod.paths_up_to(quiver, degree)
        coeffs = {}
        for path in paths:
            rows = out_dims[path.target]
            cols = in_dims[path.source]
            if rows and cols:
                coeffs[path] = _complex_gaussian(rng, (rows, cols))
        bound = free_norm_bound(coeffs, level_of=lambda pth: pth.length,
                                source_of=lambda pth: pth.source)
        scale = target / bound if bound > 0 else 1.0
        coeffs = {pth: scale * C for pth, C in coeffs.items()}
        return SchurSample("quiver", coeffs, norm_bound=target, scale=scale,
                           quiver=quiver, in_dims=in_dims, out_dims=out_dims)
    raise ArgumentError(f"unknown sample kind {kind!r}")


def _require_setting(sample: SchurSample, setting: str):
    if sample.setting != setting:
        raise ArgumentError(f"expected a {setting} sample, got {sample.setting}")


def eval_point(sample: SchurSample, lam: complex) -> np.ndarray:
    """S(lam) = sum lam^n S_n for |lam| < 1."""
    _require_setting(sample, "disk")
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError(f"|lam| = {abs(lam):.6g} >= 1")
    p, q = sample.shape
    out = np.zeros((p, q), dtype=np.complex128)
    for n, C in sample.coefficients.items():
        out += lam**n * C
    return out


def eval_ltoa(sample: SchurSample, direction, operator_point) -> np.ndarray:
    """(X S)^L(T) = sum_n T^n X S_n for r_spec(T) < 1."""
    _require_setting(sample, "disk")
    X = as_complex_matrix(direction)
    T = as_complex_matrix(operator_point)
    if matcore.spectral_radius(T) >= 1.0:
        raise DomainError("operator point must have spectral radius < 1")
    out = np.zeros((T.shape[0], sample.shape[1]), dtype=np.complex128)
    power = np.eye(T.shape[0], dtype=np.complex128)
    for n in range(max(sample.coefficients, default=-1) + 1):
        C = sample.coefficients.get(n)
        if C is not None:
            out += power @ X @ C
        power = T @ power
    return out


def eval_rtoa(sample: SchurSample, direction, operator_point) -> np.ndarray:
    """(S U)^R(A) = sum_n S_n U A^n for r_spec(A) < 1."""
    _require_setting(sample, "disk")
    U = as_complex_matrix(direction)
    A = as_complex_matrix(operator_point)
    if matcore.spectral_radius(A) >= 1.0:
        raise DomainError("operator point must have spectral radius < 1")
    out = np.zeros((sample.shape[0], A.shape[1]), dtype=np.complex128)
    power = np.eye(A.shape[0], dtype=np.complex128)
    for n in range(max(sample.coefficients, default=-1) + 1):
        C = sample.coefficients.get(n)
        if C is not None:
            out += C @ U @ power
        power = power @ A
    return out


def eval_tensor(sample: SchurSample, operator_point) -> np.ndarray:
    """S(Z) = sum_n S_n kron Z^n for r_spec(Z) < 1."""
    _require_setting(sample, "disk")
    Z = as_complex_matrix(operator_point)
    if matcore.spectral_radius(Z) >= 1.0:
        raise DomainError("operator point must have spectral radius < 1")
    p, q = sample.shape
    k = Z.shape[0]
    out = np.zeros((p * k, q * k), dtype=np.complex128)
    power = np.eye(k, dtype=np.complex128)
    for n in range(max(sample.coefficients, default=-1) + 1):
        C = sample.coefficients.get(n)
        if C is not None:
            out += np.kron(C, power)
        power = Z @ power
    return out


def eval_ball_point(sample: SchurSample, point) -> np.ndarray:
    """S(lam) = sum_g lam^g S_g at a scalar ball point."""
    _require_setting(sample, "ball")
    lam = np.asarray(point, dtype=np.complex128).reshape(-1)
    if float(np.sum(np.abs(lam) ** 2)) >= 1.0:
        raise DomainError("point lies outside the open unit ball")
    out = np.zeros(sample.shape, dtype=np.complex128)
    for w, C in sample.coefficients.items():
        out += np.prod([lam[k - 1] for k in w]) * C if w else C
    return out


def eval_ball_ltoa(sample: SchurSample, direction, operator_point,
                   transpose_words: bool = True) -> np.ndarray:
    """(X S)^L(Z) = sum_g Z^(gT) X S_g over the supported words.

    transpose_words=False evaluates with the untransposed powers Z^g; for
    commuting tuples the two agree.
    """
    _require_setting(sample, "ball")
    Z = ball_mod.as_operator_tuple(operator_point)
    if Z.row_norm >= 1.0:
        raise DomainError(f"block-row norm {Z.row_norm:.6g} >= 1")
    X = as_complex_matrix(direction)
    out = np.zeros((Z.dim, sample.shape[1]), dtype=np.complex128)
    for w, C in sample.coefficients.items():
        P = ball_mod.word_power(Z, w, transpose=transpose_words)
        out += P @ X @ C
    return out


def eval_quiver(sample: SchurSample, mode: str, **kwargs) -> np.ndarray:
    """Dispatch to the tensor or operator-argument quiver evaluation."""
    if mode == "tensor":
        return eval_quiver_tensor(sample, kwargs["operator_point"], kwargs["zdims"])
    if mode == "ltoa":
        return eval_quiver_ltoa(sample, kwargs["direction"],
                                kwargs["operator_point"], kwargs["xdims"])
    raise ArgumentError(f"unknown quiver evaluation mode {mode!r}")


def _graded_product_dims(grading_a: Grading, grading_b: Grading):
    """Offsets and total of the vertex-wise tensor product grading."""
    offsets = {}
    pos = 0
    for v in grading_a.quiver.vertices:
        offsets[v] = pos
        pos += grading_a[v] * grading_b[v]
    return offsets, pos


def eval_quiver_tensor(sample: SchurSample, operator_point, zdims: Grading
                       ) -> np.ndarray:
    """S(Z) = sum_g embed(S_g kron Z^g) mapping sum_v(U_v x Z_v) to sum_v(Y_v x Z_v)."""
    _require_setting(sample, "quiver")
    G = sample.quiver
    rep = quiver_mod.disk_membership(G, zdims, operator_point)
    if not rep.is_member:
        raise DomainError("operator point is not in the generalized disk")
    out_off, out_total = _graded_product_dims(sample.out_dims, zdims)
    in_off, in_total = _graded_product_dims(sample.in_dims, zdims)
    out = np.zeros((out_total, in_total), dtype=np.complex128)
    for path, C in sample.coefficients.items():
        P = quiver_mod.path_power(operator_point, path, zdims)
        blk = np.kron(C, P)
        r0 = out_off[path.target]
        c0 = in_off[path.source]
        out[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] += blk
    return out


def eval_quiver_ltoa(sample: SchurSample, direction, operator_point,
                     xdims: Grading) -> np.ndarray:
    """(X S)^L(T) = sum_g embed(T^(gT) X_r(g) S_g), block diagonal per vertex.

    direction is a vertex -> matrix family with X_v : out_dims[v] -> xdims[v].
    """
    _require_setting(sample, "quiver")
    G = sample.quiver
    rep = quiver_mod.disk_membership(G, xdims, operator_point)
    if not rep.is_member:
        raise DomainError("operator point is not in the transposed-quiver disk")
    X = {v: as_complex_matrix(direction[v]) for v in G.vertices}
    for v in G.vertices:
        if X[v].shape != (xdims[v], sample.out_dims[v]):
            raise ShapeError(
                f"direction block at {v!r} has shape {X[v].shape}, expected "
                f"{(xdims[v], sample.out_dims[v])}")
    out = np.zeros((xdims.total, sample.in_dims.total), dtype=np.complex128)
    in_off = {v: 0 for v in G.vertices}
    pos = 0
    for v in G.vertices:
        in_off[v] = pos
        pos += sample.in_dims[v]
    for path, C in sample.coefficients.items():
        P = quiver_mod.path_power(operator_point, path, xdims)
        blk = P @ X[path.target] @ C
        r0 = xdims.offsets[path.source]
        c0 = in_off[path.source]
        out[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] += blk
    return out


def toeplitz_truncation_norm(sample: SchurSample, levels: int) -> float:
    """Operator norm of the word/path-indexed Toeplitz truncation.

    Rows and columns are indexed by words (paths) of length <= levels; the
    entry at (g, g') is S_{g g'^-1} when the quotient exists.  The value is a
    monotone lower bound of the true multiplier norm.
    """
    if sample.setting == "disk":
        p, q = sample.shape
        n = levels
        T = np.zeros((n * p, n * q), dtype=np.complex128)
        for k, C in sample.coefficients.items():
            for r in range(k, n):
                T[r * p:(r + 1) * p, (r - k) * q:(r - k + 1) * q] = C
        return matcore.operator_norm(T)
    if sample.setting == "ball":
        p, q = sample.shape
        words = ball_mod.words_up_to(sample.d, levels)
        idx = {w: k for k, w in enumerate(words)}
        T = np.zeros((len(words) * p, len(words) * q), dtype=np.complex128)
        for col, wcol in enumerate(words):
            for w, C in sample.coefficients.items():
                wrow = w + wcol
                r = idx.get(wrow)
                if r is not None:
                    T[r * p:(r + 1) * p, col * q:(col + 1) * q] = C
        return matcore.operator_norm(T)
    if sample.setting == "quiver":
        G = sample.quiver
        paths = quiver_mod.paths_up_to(G, levels)
        path_index = {(pth.arrows, pth.source): k for k, pth in enumerate(paths)}
        row_dims = [sample.out_dims[pth.target] for pth in paths]
        col_dims = [sample.in_dims[pth.target] for pth in paths]
        row_off = np.concatenate([[0], np.cumsum(row_dims)])
        col_off = np.concatenate([[0], np.cumsum(col_dims)])
        T = np.zeros((row_off[-1], col_off[-1]), dtype=np.complex128)
        for col, pcol in enumerate(paths):
            for pth, C in sample.coefficients.items():
                if pth.source != pcol.target:
                    continue
                arrows = pcol.arrows + pth.arrows
                row = path_index.get((arrows, pcol.source))
                if row is None:
                    continue
                T[row_off[row]:row_off[row] + C.shape[0],
                  col_off[col]:col_off[col] + C.shape[1]] = C
        return matcore.operator_norm(T)
    raise ArgumentError(f"unknown sample setting {sample.setting!r}")


