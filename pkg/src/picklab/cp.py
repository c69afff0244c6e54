"""Complete-positivity machinery: Choi matrices and map constructors.

Linear maps on matrix algebras are stored extensionally by their images of
the matrix units, so the Choi block matrix [phi(e_ij)] is exact and
serializable.  Finite-dimensionally, complete positivity is equivalent to
the Choi matrix being PSD; the constructors below build the maps whose
complete positivity is equivalent to the disk and quiver Pick criteria
(their Choi matrices reproduce those Pick matrices after an index
permutation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import matcore
from . import quiver as quiver_mod
from .errors import ArgumentError, DimensionError, DomainError, MapError
from .matcore import as_complex_matrix
from .quiver import Grading, Quiver


@dataclass(eq=False)
class LinearMapOnMatrices:
    """Linear map L(C^n) -> L(C^m), stored by its n^2 unit images."""

    in_dim: int
    out_dim: int
    unit_images: np.ndarray  # shape (n, n, m, m); unit_images[i, j] = phi(e_ij)

    def __post_init__(self):
        arr = np.asarray(self.unit_images, dtype=np.complex128)
        n, m = self.in_dim, self.out_dim
        if arr.shape != (n, n, m, m):
            raise DimensionError(
                f"unit image array has shape {arr.shape}, expected {(n, n, m, m)}")
        self.unit_images = arr

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray],
                      in_dim: int) -> "LinearMapOnMatrices":
        images = []
        out_dim = None
        for i in range(in_dim):
            row = []
            for j in range(in_dim):
                unit = np.zeros((in_dim, in_dim), dtype=np.complex128)
                unit[i, j] = 1.0
                img = as_complex_matrix(func(unit))
                if out_dim is None:
                    out_dim = img.shape[0]
                row.append(img)
            images.append(row)
        return cls(in_dim, out_dim, np.array(images))

    def __call__(self, A) -> np.ndarray:
        A = as_complex_matrix(A)
        if A.shape != (self.in_dim, self.in_dim):
            raise DimensionError(
                f"argument has shape {A.shape}, expected square of {self.in_dim}")
        return np.tensordot(A, self.unit_images, axes=([0, 1], [0, 1]))

    def preserves_adjoints(self, atol: float = 1e-12) -> bool:
        """phi(A*) == phi(A)* for all A, checked on the matrix units."""
        scale = max(float(np.max(np.abs(self.unit_images))), 1.0)
        for i in range(self.in_dim):
            for j in range(self.in_dim):
                if not np.allclose(self.unit_images[i, j].conj().T,
                                   self.unit_images[j, i],
                                   rtol=0.0, atol=atol * scale):
                    return False
        return True

    def compose_inner(self, inner: "LinearMapOnMatrices") -> "LinearMapOnMatrices":
        """self after inner (unit images pushed through inner first)."""
        if inner.out_dim != self.in_dim:
            raise DimensionError("composition dimensions do not match")
        images = np.array([[self(inner.unit_images[i, j])
                            for j in range(inner.in_dim)]
                           for i in range(inner.in_dim)])
        return LinearMapOnMatrices(inner.in_dim, self.out_dim, images)


@dataclass(frozen=True)
class CpVerdict:
    is_cp: bool
    choi_min_eig: float
    witness: Optional[dict] = None


def choi_matrix(phi: LinearMapOnMatrices) -> np.ndarray:
    """Block matrix [phi(e_ij)]_{ij}, hermitized.

    Requires phi to preserve adjoints (checked on the units), so the Choi
    matrix is Hermitian up to roundoff.
    """
    if not phi.preserves_adjoints():
        raise MapError("map does not preserve adjoints; Choi matrix undefined")
    n, m = phi.in_dim, phi.out_dim
    C = np.zeros((n * m, n * m), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            C[i * m:(i + 1) * m, j * m:(j + 1) * m] = phi.unit_images[i, j]
    return matcore.hermitize(C)


def condition_compression(phi: LinearMapOnMatrices, conditions: int
                          ) -> Tuple[np.ndarray, float]:
    """Compress the Choi matrix onto matching condition pairs.

    For maps acting blockwise on N x N condition grids (unit e_(i,a)(j,b)
    maps into output block (i, j) only), the Choi matrix is the compressed
    matrix below padded with structural zeros.  Returns the compressed
    matrix, indexed by ((i, a), r), together with the largest modulus found
    outside the compression (0 up to roundoff for blockwise maps).
    """
    n, m = phi.in_dim, phi.out_dim
    if n % conditions or m % conditions:
        raise DimensionError("dimensions are not divisible by the condition count")
    a = n // conditions
    b = m // conditions
    C = choi_matrix(phi)
    rows = [(i * a + ap) * m + (i * b + r)
            for i in range(conditions) for ap in range(a) for r in range(b)]
    keep = np.ix_(rows, rows)
    compressed = C[keep]
    mask = np.ones(C.shape, dtype=bool)
    mask[keep] = False
    leak = float(np.max(np.abs(C[mask]))) if mask.any() else 0.0
    return compressed, leak


def amplified_apply(phi: LinearMapOnMatrices, B: np.ndarray, k: int) -> np.ndarray:
    """(phi tensor id_k)(B) for B an (n k)-square matrix of k x k of n-blocks."""
    B = as_complex_matrix(B)
    n, m = phi.in_dim, phi.out_dim
    if B.shape != (n * k, n * k):
        raise DimensionError(f"amplified argument has shape {B.shape}")
    out = np.zeros((m * k, m * k), dtype=np.complex128)
    for a in range(k):
        for b in range(k):
            out[a * m:(a + 1) * m, b * m:(b + 1) * m] = phi(
                B[a * n:(a + 1) * n, b * n:(b + 1) * n])
    return out


def cp_check(phi: LinearMapOnMatrices, tol="auto", witness_trials: int = 100,
             witness_seed: int = 0, max_witness_level: int = 3) -> CpVerdict:
    """Complete positivity via the Choi matrix; finite case is exact.

    When the verdict is negative, a randomized search over PSD inputs at
    amplification levels k <= 3 tries to attach a concrete witness whose
    image has a negative eigenvalue.
    """
    C = choi_matrix(phi)
    verdict = matcore.is_psd(C, tol)
    if verdict.is_psd:
        return CpVerdict(True, verdict.min_eigenvalue)
    witness = None
    rng = np.random.default_rng(witness_seed)
    n = phi.in_dim
    for _ in range(witness_trials):
        k = int(rng.integers(1, max_witness_level + 1))
        G = (rng.standard_normal((n * k, n * k))
             + 1j * rng.standard_normal((n * k, n * k)))
        B = G @ G.conj().T
        lam = matcore.min_eigenvalue(amplified_apply(phi, B, k))
        if lam < -verdict.tolerance_used:
            witness = {"level": k, "input": B, "output_min_eigenvalue": lam}
            break
    return CpVerdict(False, verdict.min_eigenvalue, witness)


def conditional_expectation_map(block_dims: Sequence[int]) -> LinearMapOnMatrices:
    """Compression to the block diagonal of the given decomposition."""
    dims = [int(b) for b in block_dims]
    if any(b < 0 for b in dims) or sum(dims) <= 0:
        raise ArgumentError("block dimensions must be nonnegative with positive sum")
    n = sum(dims)
    bounds = np.concatenate([[0], np.cumsum(dims)])
    block_of = np.zeros(n, dtype=int)
    for b in range(len(dims)):
        block_of[bounds[b]:bounds[b + 1]] = b
    images = np.zeros((n, n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            if block_of[i] == block_of[j]:
                images[i, j, i, j] = 1.0
    return LinearMapOnMatrices(n, n, images)


def build_phi_disk(operator_points, directions, targets) -> LinearMapOnMatrices:
    """CP-test map for tensor-calculus disk interpolation X_i S(Z_i) = Y_i.

    phi([B_ij]) = [sum_n X_i (I kron Z_i^n B_ij Z_j*^n) X_j*
                   - Y_i (I kron Z_i^n B_ij Z_j*^n) Y_j*], with the inner
    geometric sums computed exactly per unit by the Stein solver.  Its Choi
    matrix collapses to the standard tangential Pick matrix when the tensor
    factor is trivial.
    """
    Z = [as_complex_matrix(M) for M in operator_points]
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = len(Z)
    if not (len(X) == len(Y) == N):
        raise DimensionError("need one direction and one target per point")
    g = Z[0].shape[0]
    for M in Z:
        if M.shape != (g, g):
            raise DimensionError("operator points must share one square dimension")
        if matcore.spectral_radius(M) >= 1.0:
            raise DomainError("operator points must have spectral radius < 1")
    e = X[0].shape[0]
    if e % g != 0:
        raise DimensionError("direction dimension must be a multiple of dim Z")
    v = e // g
    for M in X + Y:
        if M.shape != (e, e):
            raise DimensionError("directions/targets must be square of V kron Z size")
    n_in = N * g
    m_out = N * e
    images = np.zeros((n_in, n_in, m_out, m_out), dtype=np.complex128)
    eye_v = np.eye(v, dtype=np.complex128)
    for i in range(N):
        for j in range(N):
            for a in range(g):
                for b in range(g):
                    unit = np.zeros((g, g), dtype=np.complex128)
                    unit[a, b] = 1.0
                    S = matcore.solve_stein(Z[i], unit, Z[j])
                    mid = np.kron(eye_v, S)
                    img = X[i] @ mid @ X[j].conj().T - Y[i] @ mid @ Y[j].conj().T
                    images[i * g + a, j * g + b,
                           i * e:(i + 1) * e, j * e:(j + 1) * e] = img
    return LinearMapOnMatrices(n_in, m_out, images)


def build_phi_star_disk(operator_points, directions, targets) -> LinearMapOnMatrices:
    """Adjoint-side CP-test map for scalar functional-calculus interpolation.

    phi*([C_ij]) = [sum_n Z_i*^n (X_i* C_ij X_j - Y_i* C_ij Y_j) Z_j^n]; its
    Choi matrix equals the functional-calculus tangential Pick matrix after
    the (i, i') index identification.
    """
    Z = [as_complex_matrix(M) for M in operator_points]
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = len(Z)
    if not (len(X) == len(Y) == N):
        raise DimensionError("need one direction and one target per point")
    z = Z[0].shape[0]
    c = X[0].shape[0]
    for M in Z:
        if M.shape != (z, z):
            raise DimensionError("operator points must share one square dimension")
        if matcore.spectral_radius(M) >= 1.0:
            raise DomainError("operator points must have spectral radius < 1")
    for M in X + Y:
        if M.shape != (c, z):
            raise DimensionError("directions/targets must map the Z space to C")
    n_in = N * c
    m_out = N * z
    images = np.zeros((n_in, n_in, m_out, m_out), dtype=np.complex128)
    for i in range(N):
        for j in range(N):
            for a in range(c):
                for b in range(c):
                    unit = np.zeros((c, c), dtype=np.complex128)
                    unit[a, b] = 1.0
                    M0 = (X[i].conj().T @ unit @ X[j]
                          - Y[i].conj().T @ unit @ Y[j])
                    S = matcore.solve_stein(Z[i].conj().T, M0, Z[j].conj().T)
                    images[i * c + a, j * c + b,
                           i * z:(i + 1) * z, j * z:(j + 1) * z] = S
    return LinearMapOnMatrices(n_in, m_out, images)


def _szego_levels(r: float, series_tol: float) -> int:
    """Truncation level with geometric tail below series_tol for unit inputs."""
    if r <= 0.0:
        return 0
    import math
    return max(0, int(math.ceil(math.log(series_tol * (1.0 - r)) / math.log(r))))


def build_phi_bar_quiver(G: Quiver, zdims: Grading, vdims: Grading,
                         operator_points, directions, targets,
                         series_tol: float = 1e-13) -> LinearMapOnMatrices:
    """Szego-kernel CP-test map, extended from block-diagonal to all of L(G-space).

    phi_bar([B_ij]) = [X_i K(Z_i, Z_j)[psi(B_ij)] X_j* - Y_i (...) Y_j*] with
    psi the vertex-block-diagonal compression; cross-vertex units map to 0.
    The Choi matrix permutes into the direct sum over vertices of the
    tensor-calculus quiver Pick matrices.
    """
    points = list(operator_points)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    N = len(points)
    if not (len(X) == len(Y) == N):
        raise DimensionError("need one direction and one target per point")
    row_norms = []
    for P in points:
        rep = quiver_mod.disk_membership(G, zdims, P)
        if not rep.is_member:
            raise DomainError("operator point outside the generalized disk")
        row_norms.append(rep.worst_row_norm)
    edim = sum(vdims[v] * zdims[v] for v in G.vertices)
    for M in X + Y:
        if M.shape[1] != edim:
            raise DimensionError(
                f"directions/targets must act on dimension {edim}")
    c = X[0].shape[0]
    eoff = {}
    pos = 0
    for v in G.vertices:
        eoff[v] = pos
        pos += vdims[v] * zdims[v]
    gdim = zdims.total
    n_in = N * gdim
    m_out = N * c
    images = np.zeros((n_in, n_in, m_out, m_out), dtype=np.complex128)
    vertex_of = {}
    local_of = {}
    for v in G.vertices:
        for t in range(zdims[v]):
            vertex_of[zdims.offsets[v] + t] = v
            local_of[zdims.offsets[v] + t] = t
    for i in range(N):
        for j in range(N):
            levels = _szego_levels(row_norms[i] * row_norms[j], series_tol)
            for a in range(gdim):
                for b in range(gdim):
                    if vertex_of[a] != vertex_of[b]:
                        continue  # the Szego kernel only reads diagonal blocks
                    v = vertex_of[a]
                    sums = quiver_mod._qltt_path_sum(
                        G, zdims, points[i], points[j], v,
                        local_of[a], local_of[b], levels)
                    mid = np.zeros((edim, edim), dtype=np.complex128)
                    for w in G.vertices:
                        if vdims[w] == 0 or zdims[w] == 0:
                            continue
                        blk = np.kron(np.eye(vdims[w]), sums[w])
                        s = slice(eoff[w], eoff[w] + vdims[w] * zdims[w])
                        mid[s, s] = blk
                    img = X[i] @ mid @ X[j].conj().T - Y[i] @ mid @ Y[j].conj().T
                    images[i * gdim + a, j * gdim + b,
                           i * c:(i + 1) * c, j * c:(j + 1) * c] = img
    return LinearMapOnMatrices(n_in, m_out, images)


def blockwise_conditional_expectation(block_dims: Sequence[int],
                                      copies: int) -> LinearMapOnMatrices:
    """Apply the block-diagonal compression inside each of copies^2 sub-blocks.

    The input space is C^(copies * n); each (i, j) sub-block of size n is
    compressed to the diagonal of the given decomposition.  This is an
    amplification of a conditional expectation, hence completely positive.
    """
    dims = [int(b) for b in block_dims]
    n = sum(dims)
    bounds = np.concatenate([[0], np.cumsum(dims)])
    block_of = np.zeros(n, dtype=int)
    for b in range(len(dims)):
        block_of[bounds[b]:bounds[b + 1]] = b
    total = copies * n
    images = np.zeros((total, total, total, total), dtype=np.complex128)
    for r in range(total):
        for c in range(total):
            if block_of[r % n] == block_of[c % n]:
                images[r, c, r, c] = 1.0
    return LinearMapOnMatrices(total, total, images)


def build_phi_quiver(G: Quiver, zdims: Grading, vdims: Grading,
                     operator_points, directions, targets,
                     series_tol: float = 1e-13) -> LinearMapOnMatrices:
    """Szego-kernel CP-test map on the block-diagonal point algebra.

    Stored extensionally (the Choi construction needs full matrix units) as
    the composition of the extended map with the blockwise conditional
    expectation; on block-diagonal inputs it is the plain Szego-kernel
    sandwich map, and its unit images coincide with the extended map's
    because the Szego kernel only reads the vertex-diagonal blocks.
    """
    phi_bar = build_phi_bar_quiver(G, zdims, vdims, operator_points,
                                   directions, targets, series_tol)
    psi = blockwise_conditional_expectation(
        [zdims[v] for v in G.vertices], len(operator_points))
    return phi_bar.compose_inner(psi)


def finite_section_kernel_check(kernel: Callable[[int, int, np.ndarray], np.ndarray],
                                points: Sequence, unit_dim: int,
                                sections: int = 1, tol="auto") -> CpVerdict:
    """CP test of a kernel through its repeated-point finite sections.

    kernel(i, j, E) evaluates K(w_i, w_j)[E] on a matrix unit E.  The
    kN-point section map (points repeated `sections` times) is tested for
    complete positivity via its Choi matrix.
    """
    if sections < 1:
        raise ArgumentError("sections must be >= 1")
    idx = list(range(len(points))) * sections
    n = len(idx) * unit_dim
    out_blocks = {}
    m = None
    for ii, pi in enumerate(idx):
        for jj, pj in enumerate(idx):
            for a in range(unit_dim):
                for b in range(unit_dim):
                    unit = np.zeros((unit_dim, unit_dim), dtype=np.complex128)
                    unit[a, b] = 1.0
                    img = as_complex_matrix(kernel(pi, pj, unit))
                    if m is None:
                        m = img.shape[0]
                    out_blocks[(ii * unit_dim + a, jj * unit_dim + b)] = img
    C = np.zeros((n * m, n * m), dtype=np.complex128)
    for (r, ccol), img in out_blocks.items():
        C[r * m:(r + 1) * m, ccol * m:(ccol + 1) * m] = img
    verdict = matcore.is_psd(matcore.hermitize(C), tol)
    return CpVerdict(verdict.is_psd, verdict.min_eigenvalue)
