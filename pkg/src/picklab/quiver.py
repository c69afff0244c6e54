"""Directed-graph (quiver) Toeplitz-algebra interpolation criteria.

A quiver is a finite directed graph; its composable arrow sequences index a
graded Toeplitz algebra.  Points live in generalized disks whose per-vertex
row blocks are strict contractions, and three Pick-matrix criteria decide
tensor-calculus, functional-calculus and operator-argument interpolation.
Path sums are truncated with certified geometric tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import config, matcore
from .errors import (
    ArgumentError,
    BudgetError,
    DomainError,
    PathError,
    ShapeError,
)
from .matcore import as_complex_matrix
from .reports import FeasibilityReport, make_report


@dataclass(frozen=True)
class Quiver:
    """Finite directed graph: vertices Q0, arrows Q1, source and range maps."""

    vertices: Tuple[str, ...]
    arrows: Tuple[str, ...]
    src: Mapping[str, str]
    rng: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "src", dict(self.src))
        object.__setattr__(self, "rng", dict(self.rng))
        if not self.vertices or not self.arrows:
            raise ArgumentError("quiver needs at least one vertex and one arrow")
        if len(set(self.vertices)) != len(self.vertices):
            raise ArgumentError("vertex names must be unique")
        if len(set(self.arrows)) != len(self.arrows):
            raise ArgumentError("arrow names must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a not in self.src or a not in self.rng:
                raise ArgumentError(f"source/range not defined for arrow {a!r}")
            if self.src[a] not in vs or self.rng[a] not in vs:
                raise ArgumentError(f"arrow {a!r} references an unknown vertex")

    def transposed(self) -> "Quiver":
        """Same graph with source and range maps interchanged."""
        return Quiver(self.vertices, self.arrows, dict(self.rng), dict(self.src))

    def arrows_out_of(self, v: str) -> List[str]:
        return [a for a in self.arrows if self.src[a] == v]

    def arrows_into(self, v: str) -> List[str]:
        return [a for a in self.arrows if self.rng[a] == v]

    def adjacency_matrix(self) -> np.ndarray:
        """A[t, s] counts arrows from vertex s to vertex t."""
        idx = {v: k for k, v in enumerate(self.vertices)}
        A = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for a in self.arrows:
            A[idx[self.rng[a]], idx[self.src[a]]] += 1
        return A

    def vertex_path(self, v: str) -> "Path":
        if v not in self.vertices:
            raise PathError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, arrows: Sequence[str]) -> "Path":
        """Path from a chronological arrow sequence (first arrow leaves the source)."""
        arrows = tuple(arrows)
        if not arrows:
            raise PathError("empty arrow sequence; use vertex_path for length 0")
        for a in arrows:
            if a not in self.src:
                raise PathError(f"unknown arrow {a!r}")
        for a, b in zip(arrows, arrows[1:]):
            if self.rng[a] != self.src[b]:
                raise PathError(f"arrows {a!r} -> {b!r} are not composable")
        return Path(arrows, self.src[arrows[0]], self.rng[arrows[-1]])


@dataclass(frozen=True)
class Path:
    """Composable arrow sequence; length-0 paths sit at a single vertex.

    Arrows are stored chronologically (arrows[0] leaves the source), so the
    conventional right-to-left path word is the reversed arrow tuple.
    """

    arrows: Tuple[str, ...]
    source: str
    target: str

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        if not self.arrows:
            return self.source
        return "".join(reversed(self.arrows))


def paths_up_to(G: Quiver, max_length: int, budget: Optional[int] = None) -> List[Path]:
    """All paths of length <= max_length, grouped by length.

    Counts per length equal the entry sums of adjacency-matrix powers; a
    BudgetError is raised before enumeration would exceed the work budget.
    """
    if max_length < 0:
        raise ArgumentError("max_length must be >= 0")
    budget = config.work_budget() if budget is None else budget
    A = G.adjacency_matrix()
    total = len(G.vertices)
    power = np.eye(len(G.vertices), dtype=np.int64)
    for _ in range(max_length):
        power = power @ A
        total += int(power.sum())
        if total > budget:
            raise BudgetError(
                f"path enumeration would produce more than {budget} paths",
                achieved_bound=total)
    out: List[Path] = [G.vertex_path(v) for v in G.vertices]
    level = out[:]
    for _ in range(max_length):
        nxt: List[Path] = []
        for p in level:
            for a in G.arrows_out_of(p.target):
                nxt.append(Path(p.arrows + (a,), p.source, G.rng[a]))
        out.extend(nxt)
        level = nxt
    return out


class Grading:
    """Vertex-graded dimension assignment with fixed index offsets."""

    def __init__(self, G: Quiver, dims: Mapping[str, int]):
        missing = set(G.vertices) - set(dims)
        if missing:
            raise ShapeError(f"missing dimensions for vertices {sorted(missing)}")
        self.quiver = G
        self.dims = {v: int(dims[v]) for v in G.vertices}
        if any(n < 0 for n in self.dims.values()):
            raise ShapeError("vertex dimensions must be >= 0")
        self.total = sum(self.dims.values())
        if self.total <= 0:
            raise ShapeError("total graded dimension must be positive")
        self.offsets: Dict[str, int] = {}
        pos = 0
        for v in G.vertices:
            self.offsets[v] = pos
            pos += self.dims[v]

    def __getitem__(self, v: str) -> int:
        return self.dims[v]

    def block_slice(self, v: str) -> slice:
        return slice(self.offsets[v], self.offsets[v] + self.dims[v])

    def embed(self, v: str, M: np.ndarray, out: np.ndarray) -> None:
        """Add M into the (v, v) diagonal block of out."""
        s = self.block_slice(v)
        out[s, s] += M


@dataclass(frozen=True, eq=False)
class QuiverPoint:
    """Arrow-indexed operator tuple; a point of a generalized disk.

    kind "tensor" uses blocks Z_a : dims[src(a)] -> dims[rng(a)]; kind
    "operator_argument" uses blocks T_a : dims[rng(a)] -> dims[src(a)]
    (a point of the transposed-quiver disk).
    """

    kind: str
    blocks: Mapping[str, np.ndarray]

    def __post_init__(self):
        if self.kind not in ("tensor", "operator_argument"):
            raise ArgumentError(f"unknown point kind {self.kind!r}")
        object.__setattr__(
            self, "blocks", {a: as_complex_matrix(M) for a, M in self.blocks.items()})


@dataclass(frozen=True)
class MembershipReport:
    is_member: bool
    worst_row_norm: float
    row_norms: Dict[str, float]


def _expected_block_shape(G: Quiver, dims: Grading, kind: str, a: str):
    if kind == "tensor":
        return (dims[G.rng[a]], dims[G.src[a]])
    return (dims[G.src[a]], dims[G.rng[a]])


def disk_membership(G: Quiver, dims: Grading, point: QuiverPoint) -> MembershipReport:
    """Strict-contraction test of the per-vertex row blocks."""
    for a in G.arrows:
        if a not in point.blocks:
            raise ShapeError(f"missing block for arrow {a!r}")
        want = _expected_block_shape(G, dims, point.kind, a)
        got = point.blocks[a].shape
        if got != want:
            raise ShapeError(f"block for arrow {a!r} has shape {got}, expected {want}")
    row_norms: Dict[str, float] = {}
    for v in G.vertices:
        if point.kind == "tensor":
            members = [point.blocks[a] for a in G.arrows_into(v)]
        else:
            members = [point.blocks[a] for a in G.arrows_out_of(v)]
        members = [M for M in members if M.size]
        if members:
            row_norms[v] = matcore.operator_norm(np.hstack(members))
        else:
            row_norms[v] = 0.0
    worst = max(row_norms.values())
    return MembershipReport(worst < 1.0, worst, row_norms)


def path_power(point: QuiverPoint, path: Path, dims: Grading) -> np.ndarray:
    """Ordered block product along a path.

    Tensor points give Z^gamma : dims[source] -> dims[target]; operator
    arguments give the transposed-word power T_(a1) ... T_(an) :
    dims[target] -> dims[source].
    """
    for a in path.arrows:
        if a not in point.blocks:
            raise PathError(f"point has no block for arrow {a!r}")
    if point.kind == "tensor":
        M = np.eye(dims[path.source], dtype=np.complex128)
        for a in path.arrows:
            M = point.blocks[a] @ M
        return M
    M = np.eye(dims[path.target], dtype=np.complex128)
    for a in reversed(path.arrows):
        M = point.blocks[a] @ M
    return M


def _plan_path_sums(entries, G: Quiver, series_tol: float, budget: int):
    """Dataset-level truncation plan; one (levels, tail) pair per entry."""
    for r, _ in entries:
        if r >= 1.0:
            raise DomainError(f"level-recursion ratio {r:.6g} >= 1")
    return matcore.plan_levels(entries, len(G.arrows), series_tol, budget)


def _block_tail_norm(tails: np.ndarray) -> float:
    return float(np.linalg.norm(tails, 2))


def _check_points(G, dims, points, kind):
    reports = []
    for k, P in enumerate(points):
        if P.kind != kind:
            raise ArgumentError(f"point {k} has kind {P.kind!r}, expected {kind!r}")
        rep = disk_membership(G, dims, P)
        if not rep.is_member:
            raise DomainError(
                f"point {k} is not in the generalized disk "
                f"(worst row norm {rep.worst_row_norm:.6g})")
        reports.append(rep)
    return reports


def pick_qltt(G: Quiver, zdims: Grading, ydims: Grading, points, directions,
              targets, tol="auto", series_tol=1e-12,
              budget: Optional[int] = None) -> Dict[str, FeasibilityReport]:
    """Per-vertex Pick matrices for tensor-calculus tangential interpolation.

    Data: points Z^(i) in the generalized disk over zdims, directions X_i and
    targets Y_i in L(Q, C) with Q = sum_v (Y_v tensor Z_v) and a shared
    output/input grading ydims.  For each vertex v the matrix over index
    pairs ((i, i'), (j, j')), i' <= zdims[v], sums over paths with source v
    the embedded blocks X_i (I tensor Z^g e_i' e_j'* Z^g*) X_j* minus the
    same with Y.  The problem is solvable iff every vertex matrix is PSD.
    """
    budget = config.work_budget() if budget is None else budget
    reports = _check_points(G, zdims, points, "tensor")
    N = len(points)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    if not (len(X) == len(Y) == N):
        raise ShapeError("need one direction and one target per point")
    qdim = sum(ydims[v] * zdims[v] for v in G.vertices)
    for M in X + Y:
        if M.shape[1] != qdim:
            raise ShapeError(
                f"direction/target acts on dimension {M.shape[1]}, expected {qdim}")
    c = X[0].shape[0]
    if any(M.shape[0] != c for M in X + Y):
        raise ShapeError("directions and targets must share one output dimension")
    xnorm = [matcore.operator_norm(M) for M in X]
    ynorm = [matcore.operator_norm(M) for M in Y]
    # offsets of the (Y_v tensor Z_v) summands inside Q
    qoff: Dict[str, int] = {}
    pos = 0
    for v in G.vertices:
        qoff[v] = pos
        pos += ydims[v] * zdims[v]

    # one geometric plan per (vertex, i, j, basis pair): ratios repeat per
    # (i, j), unit-rank starting norms are 1
    pair_entries = [(reports[i].worst_row_norm * reports[j].worst_row_norm, 1.0)
                    for i in range(N) for j in range(N)]
    kv_total = sum(zdims[v] ** 2 for v in G.vertices)
    levels_ij, tails_ij = _plan_path_sums(
        [e for e in pair_entries for _ in range(kv_total)], G, series_tol,
        budget)
    levels_ij = levels_ij[::max(kv_total, 1)]
    tails_ij = tails_ij[::max(kv_total, 1)]

    out: Dict[str, FeasibilityReport] = {}
    for v in G.vertices:
        kv = zdims[v]
        if kv == 0:
            continue
        size = N * kv * c
        pick = np.zeros((size, size), dtype=np.complex128)
        tails = np.zeros((N * kv, N * kv))
        for i in range(N):
            for j in range(N):
                L = levels_ij[i * N + j]
                tail_a = tails_ij[i * N + j]
                for ip in range(kv):
                    for jp in range(kv):
                        A_sum = _qltt_path_sum(G, zdims, points[i], points[j],
                                               v, ip, jp, L)
                        middle = np.zeros((qdim, qdim), dtype=np.complex128)
                        for w in G.vertices:
                            if ydims[w] == 0 or zdims[w] == 0:
                                continue
                            blk = np.kron(np.eye(ydims[w]), A_sum[w])
                            s = slice(qoff[w], qoff[w] + ydims[w] * zdims[w])
                            middle[s, s] = blk
                        block = X[i] @ middle @ X[j].conj().T \
                            - Y[i] @ middle @ Y[j].conj().T
                        ri = (i * kv + ip) * c
                        cj = (j * kv + jp) * c
                        pick[ri:ri + c, cj:cj + c] = block
                        tails[i * kv + ip, j * kv + jp] = \
                            tail_a * (xnorm[i] * xnorm[j] + ynorm[i] * ynorm[j])
        method = "closed_form" if tails.max() == 0 else "truncated_series"
        out[v] = make_report(pick, method, _block_tail_norm(tails), tol)
    return out


def _qltt_path_sum(G, zdims, Pi, Pj, v, ip, jp, levels):
    """sum over paths g with source v of Z_i^g e_ip e_jp* Z_j^g*, per target vertex."""
    K = {w: np.zeros((zdims[w], zdims[w]), dtype=np.complex128) for w in G.vertices}
    unit = np.zeros((zdims[v], zdims[v]), dtype=np.complex128)
    unit[ip, jp] = 1.0
    K[v] = unit
    acc = {w: K[w].copy() for w in G.vertices}
    for _ in range(levels):
        nxt = {w: np.zeros((zdims[w], zdims[w]), dtype=np.complex128)
               for w in G.vertices}
        for a in G.arrows:
            s, t = G.src[a], G.rng[a]
            if zdims[s] and zdims[t]:
                nxt[t] += Pi.blocks[a] @ K[s] @ Pj.blocks[a].conj().T
        K = nxt
        for w in G.vertices:
            acc[w] += K[w]
    return acc


def pick_qltrd(G: Quiver, zdims: Grading, points, directions, targets,
               basis_dim: Optional[int] = None, tol="auto", series_tol=1e-12,
               budget: Optional[int] = None) -> FeasibilityReport:
    """Pick matrix for functional-calculus tangential interpolation.

    Data: points Z^(i) over zdims and X_i, Y_i in L(Z, C) with dim C = kappa.
    The matrix over ((i, i'), (j, j')) sums, over all paths, the adjoint-side
    conjugations Z_i^g* [X_i* e_i' e_j'* X_j - Y_i* e_i' e_j'* Y_j] Z_j^g,
    embedded per source vertex, giving one (N kappa dimZ)-square matrix.
    """
    budget = config.work_budget() if budget is None else budget
    reports = _check_points(G, zdims, points, "tensor")
    N = len(points)
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    if not (len(X) == len(Y) == N):
        raise ShapeError("need one direction and one target per point")
    zdim = zdims.total
    for M in X + Y:
        if M.shape[1] != zdim:
            raise ShapeError(
                f"direction/target acts on dimension {M.shape[1]}, expected {zdim}")
    kappa = X[0].shape[0]
    if any(M.shape[0] != kappa for M in X + Y):
        raise ShapeError("directions and targets must share one output dimension")
    if basis_dim is not None and basis_dim != kappa:
        raise ShapeError("basis_dim must equal the common output dimension of X, Y")

    size = N * kappa * zdim
    middles = {}
    entries = []
    keys = []
    for i in range(N):
        for j in range(N):
            r = reports[i].worst_row_norm * reports[j].worst_row_norm
            for ip in range(kappa):
                for jp in range(kappa):
                    xi = X[i].conj().T[:, ip:ip + 1]
                    xj = X[j].conj().T[:, jp:jp + 1]
                    yi = Y[i].conj().T[:, ip:ip + 1]
                    yj = Y[j].conj().T[:, jp:jp + 1]
                    M0 = xi @ xj.conj().T - yi @ yj.conj().T
                    middles[i, j, ip, jp] = M0
                    # adjoint-side recursion: trace argument adds a dim factor
                    entries.append((r, zdim * matcore.operator_norm(M0)))
                    keys.append((i, j, ip, jp))
    levels, tail_list = _plan_path_sums(entries, G, series_tol, budget)
    pick = np.zeros((size, size), dtype=np.complex128)
    tails = np.zeros((N * kappa, N * kappa))
    for (i, j, ip, jp), L, tail in zip(keys, levels, tail_list):
        block = _qltrd_path_sum(G, zdims, points[i], points[j],
                                middles[i, j, ip, jp], L)
        ri = (i * kappa + ip) * zdim
        cj = (j * kappa + jp) * zdim
        pick[ri:ri + zdim, cj:cj + zdim] = block
        tails[i * kappa + ip, j * kappa + jp] = tail
    method = "closed_form" if tails.max() == 0 else "truncated_series"
    return make_report(pick, method, _block_tail_norm(tails), tol)


def _qltrd_path_sum(G, zdims, Pi, Pj, M0, levels):
    """sum over paths g of Z_i^g* [M0]_(r(g)) Z_j^g, embedded per source vertex."""
    Lcur = {v: np.asarray(M0[zdims.block_slice(v), zdims.block_slice(v)])
            for v in G.vertices}
    acc = {v: Lcur[v].copy() for v in G.vertices}
    for _ in range(levels):
        nxt = {v: np.zeros((zdims[v], zdims[v]), dtype=np.complex128)
               for v in G.vertices}
        for a in G.arrows:
            s, t = G.src[a], G.rng[a]
            if zdims[s] and zdims[t]:
                nxt[s] += Pi.blocks[a].conj().T @ Lcur[t] @ Pj.blocks[a]
        Lcur = nxt
        for v in G.vertices:
            acc[v] += Lcur[v]
    out = np.zeros((zdims.total, zdims.total), dtype=np.complex128)
    for v in G.vertices:
        zdims.embed(v, acc[v], out)
    return out


def split_block_diagonal(M, row_grading: Grading, col_grading: Grading,
                         atol: float = 0.0) -> Dict[str, np.ndarray]:
    """Split a vertex-block-diagonal matrix; ShapeError on off-diagonal mass."""
    M = as_complex_matrix(M)
    if M.shape != (row_grading.total, col_grading.total):
        raise ShapeError(f"matrix shape {M.shape} does not match the gradings")
    out = {}
    mask = np.ones(M.shape, dtype=bool)
    for v in row_grading.quiver.vertices:
        rs, cs = row_grading.block_slice(v), col_grading.block_slice(v)
        out[v] = M[rs, cs]
        mask[rs, cs] = False
    if np.any(np.abs(M[mask]) > atol):
        raise ShapeError("matrix is not block-diagonal over the vertex grading")
    return out


def pick_qltoa(G: Quiver, xdims: Grading, points, directions, targets,
               tol="auto", series_tol=1e-12,
               budget: Optional[int] = None) -> FeasibilityReport:
    """Pick matrix for operator-argument tangential interpolation.

    Data: points T^(i) in the transposed-quiver disk over xdims, and
    block-diagonal directions/targets given per vertex (dicts v -> X_v, Y_v
    with X_v : Y_v-space -> X_v-space).  Block (i, j) sums over paths g the
    transposed-word conjugations T_i^gT (X_r(g) X_r(g)* - Y_r(g) Y_r(g)*)
    T_j^gT*, embedded per source vertex; the result is N dim(X) square.
    """
    budget = config.work_budget() if budget is None else budget
    reports = _check_points(G, xdims, points, "operator_argument")
    N = len(points)
    X = [_as_vertex_family(G, D, xdims, "direction") for D in directions]
    Y = [_as_vertex_family(G, D, xdims, "target") for D in targets]
    if not (len(X) == len(Y) == N):
        raise ShapeError("need one direction and one target per point")
    xdim = xdims.total
    middles = {}
    entries = []
    for i in range(N):
        for j in range(N):
            M0 = {}
            norms = []
            for v in G.vertices:
                Mv = X[i][v] @ X[j][v].conj().T - Y[i][v] @ Y[j][v].conj().T
                M0[v] = Mv
                if Mv.size:
                    norms.append(matcore.operator_norm(Mv))
            middles[i, j] = M0
            entries.append((reports[i].worst_row_norm
                            * reports[j].worst_row_norm,
                            max(norms, default=0.0)))
    levels, tail_list = _plan_path_sums(entries, G, series_tol, budget)
    pick = np.zeros((N * xdim, N * xdim), dtype=np.complex128)
    tails = np.zeros((N, N))
    for i in range(N):
        for j in range(N):
            block = _qltoa_path_sum(G, xdims, points[i], points[j],
                                    middles[i, j], levels[i * N + j])
            pick[i * xdim:(i + 1) * xdim, j * xdim:(j + 1) * xdim] = block
            tails[i, j] = tail_list[i * N + j]
    method = "closed_form" if tails.max() == 0 else "truncated_series"
    return make_report(pick, method, _block_tail_norm(tails), tol)


def _as_vertex_family(G, D, xdims: Grading, what: str) -> Dict[str, np.ndarray]:
    if not isinstance(D, Mapping):
        raise ShapeError(f"{what} must be a vertex -> matrix mapping "
                         f"(use split_block_diagonal for full matrices)")
    out = {}
    for v in G.vertices:
        if v not in D:
            raise ShapeError(f"{what} missing block for vertex {v!r}")
        M = as_complex_matrix(D[v])
        if M.shape[0] != xdims[v]:
            raise ShapeError(
                f"{what} block at {v!r} has {M.shape[0]} rows, expected {xdims[v]}")
        out[v] = M
    return out


def _qltoa_path_sum(G, xdims, Pi, Pj, M0, levels):
    """sum over paths g with source v of T_i^gT M0[r(g)] T_j^gT*, per source."""
    Scur = {v: M0[v].astype(np.complex128, copy=True) for v in G.vertices}
    acc = {v: Scur[v].copy() for v in G.vertices}
    for _ in range(levels):
        nxt = {v: np.zeros((xdims[v], xdims[v]), dtype=np.complex128)
               for v in G.vertices}
        for a in G.arrows:
            s, t = G.src[a], G.rng[a]
            if xdims[s] and xdims[t]:
                nxt[s] += Pi.blocks[a] @ Scur[t] @ Pj.blocks[a].conj().T
        Scur = nxt
        for v in G.vertices:
            acc[v] += Scur[v]
    out = np.zeros((xdims.total, xdims.total), dtype=np.complex128)
    for v in G.vertices:
        xdims.embed(v, acc[v], out)
    return out


@dataclass(frozen=True, eq=False)
class ConstantMultiplierResult:
    verdict: matcore.PsdVerdict
    delta: Optional[complex]
    pick: np.ndarray
    rank_one_form: np.ndarray


def constant_multiplier_check(directions, targets, tol="auto") -> ConstantMultiplierResult:
    """Decide existence of a scalar |delta| <= 1 with delta X_i = Y_i.

    Builds the basis-indexed matrix [X_i e_i' e_j'* X_j* - Y_i e_i' e_j'* Y_j*]
    and its rank-one permutation uu* - vv*; PSD of either is equivalent to the
    existence of the constant multiplier, with witnessing
    delta = <vec Y, vec X> / ||vec X||^2.
    """
    X = [as_complex_matrix(M) for M in directions]
    Y = [as_complex_matrix(M) for M in targets]
    if len(X) != len(Y) or not X:
        raise ShapeError("need equally many directions and targets")
    shape = X[0].shape
    if any(M.shape != shape for M in X + Y):
        raise ShapeError("all directions and targets must share one shape")
    N = len(X)
    k, kappa = shape
    Xs = np.vstack(X)
    Ys = np.vstack(Y)
    u = Xs.flatten(order="F").reshape(-1, 1)
    v = Ys.flatten(order="F").reshape(-1, 1)
    rank_one = u @ u.conj().T - v @ v.conj().T
    size = N * kappa * k
    pick = np.zeros((size, size), dtype=np.complex128)
    for i in range(N):
        for ip in range(kappa):
            ri = (i * kappa + ip) * k
            for j in range(N):
                for jp in range(kappa):
                    cj = (j * kappa + jp) * k
                    pick[ri:ri + k, cj:cj + k] = (
                        X[i][:, ip:ip + 1] @ X[j][:, jp:jp + 1].conj().T
                        - Y[i][:, ip:ip + 1] @ Y[j][:, jp:jp + 1].conj().T)
    verdict = matcore.is_psd(pick, tol)
    delta: Optional[complex] = None
    if verdict.is_psd:
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            delta = 0.0 + 0.0j
        else:
            cand = complex((u.conj().T @ v)[0, 0] / nu**2)
            resid = float(np.linalg.norm(cand * u - v))
            if abs(cand) <= 1.0 + 1e-10 and resid <= 1e-8 * max(1.0, nu):
                delta = cand
    return ConstantMultiplierResult(verdict, delta, matcore.hermitize(pick),
                                    matcore.hermitize(rank_one))


def two_vertex_example() -> Tuple[Quiver, str, str]:
    """The two-vertex quiver with a loop at a and an arrow a -> b."""
    G = Quiver(("a", "b"), ("alpha", "beta"),
               {"alpha": "a", "beta": "a"}, {"alpha": "a", "beta": "b"})
    return G, "alpha", "beta"


def two_vertex_toeplitz_norm(v_coeffs, w_coeffs, b0, truncation: int) -> float:
    """Norm of the truncated multiplication operator [[M_V, 0], [M_W, M_B0]].

    Taylor indices 0..truncation are kept in both Hardy-space components; the
    value increases monotonically in the truncation and lower-bounds the true
    multiplier norm.
    """
    if truncation < 0:
        raise ArgumentError("truncation must be >= 0")
    V = [as_complex_matrix(M) for M in v_coeffs]
    W = [as_complex_matrix(M) for M in w_coeffs]
    B0 = as_complex_matrix(b0)
    da = V[0].shape[0] if V else (W[0].shape[1] if W else 1)
    db = B0.shape[0]
    L = truncation + 1
    def toeplitz(coeffs, rows, cols):
        T = np.zeros((L * rows, L * cols), dtype=np.complex128)
        for n, C in enumerate(coeffs):
            if n >= L:
                break
            for r in range(n, L):
                T[r * rows:(r + 1) * rows, (r - n) * cols:(r - n + 1) * cols] = C
        return T
    TV = toeplitz(V, da, da)
    TW = toeplitz(W, db, da)
    TB = np.kron(np.eye(L), B0)
    top = np.hstack([TV, np.zeros((L * da, L * db))])
    bot = np.hstack([TW, TB])
    return matcore.operator_norm(np.vstack([top, bot]))
