"""Seeded necessity suites: oracle-generated data must pass every criterion.

Each trial samples a certified Schur-class element, evaluates it on random
admissible data to manufacture interpolation conditions, and builds the
corresponding Pick matrix.  Because the sampled element genuinely solves the
interpolation problem, the criterion's necessity direction forces the Pick
matrix to be PSD up to the reported series tail; the per-trial margin is
min_eigenvalue + tail_bound + slack, which must be nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass


import numpy as np

from . import ball as ball_mod
from . import disk as disk_mod
from . import matcore, oracle
from . import quiver as quiver_mod
from .errors import ArgumentError
from .quiver import Grading, QuiverPoint

SLACK = 1e-8

SETTINGS = (
    "disk.fov", "disk.lt", "disk.rt", "disk.ltoa", "disk.rtoa",
    "disk.frd", "disk.ltrd", "disk.rtrd",
    "ball.nc_ltoa", "ball.da_ltoa",
    "quiver.qltt", "quiver.qltrd", "quiver.qltoa",
)


@dataclass(frozen=True)
class TrialResult:
    min_eigenvalue: float
    tail_bound: float

    @property
    def margin(self) -> float:
        return self.min_eigenvalue + self.tail_bound + SLACK


@dataclass(frozen=True)
class SuiteResult:
    setting: str
    trials: int
    results: tuple
    seed: int

    @property
    def worst_margin(self) -> float:
        return min(r.margin for r in self.results)

    @property
    def worst_min_eigenvalue(self) -> float:
        return min(r.min_eigenvalue for r in self.results)

    @property
    def passed(self) -> bool:
        return self.worst_margin >= 0.0


def _cg(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _contraction(rng, n, bound=0.7):
    M = _cg(rng, n, n)
    return M * (bound * rng.uniform(0.3, 1.0) / matcore.operator_norm(M))


def _disk_points(rng, n, radius=0.8):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(0, 2 * np.pi, n))


def _row_tuple(rng, n, d, bound=0.7):
    mats = [_cg(rng, n, n) for _ in range(d)]
    s = bound * rng.uniform(0.4, 1.0) / matcore.operator_norm(np.hstack(mats))
    return [M * s for M in mats]


def _commuting_tuple(rng, n, d, bound=0.7):
    Q, _ = np.linalg.qr(_cg(rng, n, n))
    diags = rng.uniform(-1, 1, (d, n)) + 1j * rng.uniform(-1, 1, (d, n))
    scale = bound * rng.uniform(0.4, 1.0) / np.max(
        np.sqrt(np.sum(np.abs(diags) ** 2, axis=0)))
    return [Q @ np.diag(scale * diags[k]) @ Q.conj().T for k in range(d)]


def run_trial(setting: str, seed: int) -> TrialResult:
    rng = np.random.default_rng(seed)
    N = 2
    if setting.startswith("disk."):
        variant = setting.split(".", 1)[1]
        if variant in ("fov", "lt", "rt"):
            sample = oracle.sample_contractive_poly(2, 2, 3, "disk", seed)
            lams = _disk_points(rng, N)
            vals = [oracle.eval_point(sample, l) for l in lams]
            if variant == "fov":
                rep = disk_mod.pick_fov(lams, vals)
            elif variant == "lt":
                X = [_cg(rng, 2, 2) for _ in range(N)]
                rep = disk_mod.pick_lt(lams, X, [X[i] @ vals[i] for i in range(N)])
            else:
                U = [_cg(rng, 2, 2) for _ in range(N)]
                rep = disk_mod.pick_rt(lams, U, [vals[i] @ U[i] for i in range(N)])
            return TrialResult(rep.min_eigenvalue, rep.tail_bound)
        if variant in ("ltoa", "rtoa"):
            sample = oracle.sample_contractive_poly(2, 2, 3, "disk", seed)
            pts = [_contraction(rng, 2) for _ in range(N)]
            if variant == "ltoa":
                X = [_cg(rng, 2, 2) for _ in range(N)]
                Y = [oracle.eval_ltoa(sample, X[i], pts[i]) for i in range(N)]
                rep = disk_mod.pick_ltoa(pts, X, Y)
            else:
                U = [_cg(rng, 2, 2) for _ in range(N)]
                V = [oracle.eval_rtoa(sample, U[i], pts[i]) for i in range(N)]
                rep = disk_mod.pick_rtoa(pts, U, V)
            return TrialResult(rep.min_eigenvalue, rep.tail_bound)
        if variant in ("frd", "ltrd", "rtrd"):
            sample = oracle.sample_contractive_poly(1, 1, 4, "disk", seed)
            Z = [_contraction(rng, 2) for _ in range(N)]
            sval = [oracle.eval_tensor(sample, Zi) for Zi in Z]
            if variant == "frd":
                rep = disk_mod.pick_frd(Z, sval)
            elif variant == "ltrd":
                X = [_cg(rng, 2, 2) for _ in range(N)]
                rep = disk_mod.pick_ltrd(Z, X, [X[i] @ sval[i] for i in range(N)])
            else:
                U = [_cg(rng, 2, 2) for _ in range(N)]
                rep = disk_mod.pick_rtrd(Z, U, [sval[i] @ U[i] for i in range(N)])
            return TrialResult(rep.min_eigenvalue, rep.tail_bound)
    if setting == "ball.nc_ltoa":
        sample = oracle.sample_contractive_poly(2, 2, 2, "ball", seed, d=2)
        pts = [_row_tuple(rng, 2, 2) for _ in range(N)]
        X = [_cg(rng, 2, 2) for _ in range(N)]
        Y = [oracle.eval_ball_ltoa(sample, X[i], pts[i]) for i in range(N)]
        rep = ball_mod.pick_nc_ltoa(pts, X, Y, series_tol=1e-12)
        return TrialResult(rep.min_eigenvalue, rep.tail_bound)
    if setting == "ball.da_ltoa":
        sample = oracle.sample_contractive_poly(2, 2, 2, "ball", seed, d=2)
        pts = [_commuting_tuple(rng, 2, 2) for _ in range(N)]
        X = [_cg(rng, 2, 2) for _ in range(N)]
        Y = [oracle.eval_ball_ltoa(sample, X[i], pts[i]) for i in range(N)]
        rep = ball_mod.pick_da_ltoa(pts, X, Y, series_tol=1e-12)
        return TrialResult(rep.min_eigenvalue, rep.tail_bound)
    if setting.startswith("quiver."):
        G, _, _ = quiver_mod.two_vertex_example()
        ones = Grading(G, {"a": 1, "b": 1})
        sample = oracle.sample_contractive_poly(
            1, 1, 3, "quiver", seed, quiver=G, in_dims=ones, out_dims=ones)
        variant = setting.split(".", 1)[1]
        if variant == "qltt":
            zdims = Grading(G, {"a": 2, "b": 1})
            pts = [_tensor_point(rng, G, zdims) for _ in range(N)]
            edim = sum(zdims[v] for v in G.vertices)  # vd = 1 per vertex
            X = [_cg(rng, 2, edim) for _ in range(N)]
            Y = [X[i] @ oracle.eval_quiver_tensor(sample, pts[i], zdims)
                 for i in range(N)]
            reps = quiver_mod.pick_qltt(G, zdims, ones, pts, X, Y,
                                        series_tol=1e-12)
            worst = min(r.min_eigenvalue for r in reps.values())
            tail = max(r.tail_bound for r in reps.values())
            return TrialResult(worst, tail)
        if variant == "qltrd":
            zdims = Grading(G, {"a": 2, "b": 1})
            pts = [_tensor_point(rng, G, zdims) for _ in range(N)]
            X = [_cg(rng, 2, zdims.total) for _ in range(N)]
            Y = [X[i] @ oracle.eval_quiver_tensor(sample, pts[i], zdims)
                 for i in range(N)]
            rep = quiver_mod.pick_qltrd(G, zdims, pts, X, Y, series_tol=1e-12)
            return TrialResult(rep.min_eigenvalue, rep.tail_bound)
        if variant == "qltoa":
            xdims = Grading(G, {"a": 2, "b": 1})
            pts = [_oa_point(rng, G, xdims) for _ in range(N)]
            X = [{v: _cg(rng, xdims[v], 1) for v in G.vertices} for _ in range(N)]
            Y = []
            for i in range(N):
                full = oracle.eval_quiver_ltoa(sample, X[i], pts[i], xdims)
                Y.append({v: full[xdims.block_slice(v), k:k + 1]
                          for k, v in enumerate(G.vertices)})
            rep = quiver_mod.pick_qltoa(G, xdims, pts, X, Y, series_tol=1e-12)
            return TrialResult(rep.min_eigenvalue, rep.tail_bound)
    raise ArgumentError(f"unknown necessity setting {setting!r}")


def _tensor_point(rng, G, zdims):
    blocks = {}
    for a in G.arrows:
        blocks[a] = _cg(rng, zdims[G.rng[a]], zdims[G.src[a]])
    point = QuiverPoint("tensor", blocks)
    rep = quiver_mod.disk_membership(G, zdims, point)
    scale = 0.7 * rng.uniform(0.4, 1.0) / max(rep.worst_row_norm, 1e-12)
    return QuiverPoint("tensor", {a: M * scale for a, M in blocks.items()})


def _oa_point(rng, G, xdims):
    blocks = {}
    for a in G.arrows:
        blocks[a] = _cg(rng, xdims[G.src[a]], xdims[G.rng[a]])
    point = QuiverPoint("operator_argument", blocks)
    rep = quiver_mod.disk_membership(G, xdims, point)
    scale = 0.7 * rng.uniform(0.4, 1.0) / max(rep.worst_row_norm, 1e-12)
    return QuiverPoint("operator_argument",
                       {a: M * scale for a, M in blocks.items()})


def run_suite(setting: str, trials: int, seed: int) -> SuiteResult:
    if setting not in SETTINGS:
        raise ArgumentError(f"unknown necessity setting {setting!r}; "
                            f"choose from {', '.join(SETTINGS)}")
    seeds = np.random.SeedSequence(seed).generate_state(trials)
    results = tuple(run_trial(setting, int(s)) for s in seeds)
    return SuiteResult(setting, trials, results, seed)
