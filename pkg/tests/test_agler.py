import numpy as np
import pytest

from picklab import agler, disk, matcore, oracle
from picklab.errors import BudgetError, DimensionError, DomainError


def cg(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def contraction(rng, n, bound=0.6):
    M = cg(rng, n, n)
    return M * (bound / matcore.operator_norm(M))


FEASIBLE_POINTS = [[0.0, 0.0], [0.5, 0.0]]
FEASIBLE_VALUES = [0.0, 0.5]  # from f(lam) = lam_1
INFEASIBLE_POINTS = [[0.0, 0.0], [0.0, 0.0]]
INFEASIBLE_VALUES = [0.0, 0.5]


class TestConstraintPieces:
    def test_rhs_equal_directions_zero(self):
        rng = np.random.default_rng(0)
        X = [cg(rng, 2, 2) for _ in range(2)]
        T = [[contraction(rng, 2) for _ in range(2)] for _ in range(2)]
        prob = agler.nc_ltoa_problem(T, X, X)
        assert np.max(np.abs(agler.constraint_rhs(prob))) == 0.0

    def test_rhs_zero_function_all_ones(self):
        prob = agler.scalar_problem([[0.1, 0.2], [0.3, -0.1]], [0.0, 0.0])
        assert np.allclose(agler.constraint_rhs(prob), np.ones((2, 2)))

    def test_rhs_hand_evaluated(self):
        prob = agler.scalar_problem(INFEASIBLE_POINTS, INFEASIBLE_VALUES)
        assert np.allclose(agler.constraint_rhs(prob), [[1, 1], [1, 0.75]])

    def test_apply_constraint_zero_kernels(self):
        prob = agler.scalar_problem(FEASIBLE_POINTS, FEASIBLE_VALUES)
        Ks = [np.zeros((2, 2))] * 2
        assert np.max(np.abs(agler.apply_constraint(Ks, prob))) == 0.0

    def test_apply_constraint_d1_scalar_form(self):
        pts = [[0.3], [0.2j]]
        prob = agler.scalar_problem(pts, [0.1, 0.0])
        rng = np.random.default_rng(1)
        K = matcore.hermitize(cg(rng, 2, 2))
        out = agler.apply_constraint([K], prob)
        lam = np.array([0.3, 0.2j])
        expect = K * (1 - lam[:, None] * lam[None, :].conj())
        assert np.max(np.abs(out - expect)) <= 1e-14

    def test_apply_constraint_zero_tuples_sums_kernels(self):
        T = [[np.zeros((1, 1))] * 2, [np.zeros((1, 1))] * 2]
        prob = agler.nc_ltoa_problem(T, [np.eye(1)] * 2, [np.zeros((1, 1))] * 2)
        rng = np.random.default_rng(2)
        K1 = matcore.hermitize(cg(rng, 2, 2))
        K2 = matcore.hermitize(cg(rng, 2, 2))
        assert np.max(np.abs(agler.apply_constraint([K1, K2], prob)
                             - (K1 + K2))) <= 1e-14

    def test_linearity(self):
        prob = agler.scalar_problem(FEASIBLE_POINTS, FEASIBLE_VALUES)
        rng = np.random.default_rng(3)
        A1 = [cg(rng, 2, 2) for _ in range(2)]
        A2 = [cg(rng, 2, 2) for _ in range(2)]
        a, b = 1.3 - 0.2j, -0.7j
        lhs = agler.apply_constraint(
            [a * A1[k] + b * A2[k] for k in range(2)], prob)
        rhs = (a * agler.apply_constraint(A1, prob)
               + b * agler.apply_constraint(A2, prob))
        assert np.max(np.abs(lhs - rhs)) <= 1e-13


class TestSolver:
    def test_feasible_bidisk_fixture(self):
        prob = agler.scalar_problem(FEASIBLE_POINTS, FEASIBLE_VALUES)
        rep = agler.solve_feasibility(prob, tol=1e-6, max_iter=10000)
        assert rep.status == "feasible_with_certificate"
        assert rep.iterations <= 10000
        res, eigs = agler.verify_certificate(prob, rep.certificate.kernels)
        assert res <= 2e-6
        assert min(eigs) >= -2e-6
        # the hand-checked certificate: K_1 = all-ones, K_2 = 0
        assert np.max(np.abs(rep.certificate.kernels[0]
                             - np.ones((2, 2)))) <= 1e-3
        assert np.max(np.abs(rep.certificate.kernels[1])) <= 1e-3

    def test_infeasible_forced_sum_fixture(self):
        prob = agler.scalar_problem(INFEASIBLE_POINTS, INFEASIBLE_VALUES)
        rep = agler.solve_feasibility(prob, tol=1e-6, max_iter=10000)
        assert rep.status == "infeasible_evidence"
        assert rep.gap_estimate >= 1e-3
        # the affine set forces K_1 + K_2 = [[1, 1], [1, 3/4]], not PSD
        assert matcore.min_eigenvalue([[1, 1], [1, 0.75]]) < 0

    def test_certificate_verification_matches_solver(self):
        prob = agler.scalar_problem(FEASIBLE_POINTS, FEASIBLE_VALUES)
        rep = agler.solve_feasibility(prob, tol=1e-6)
        res, _ = agler.verify_certificate(prob, rep.certificate.kernels)
        assert res == pytest.approx(rep.certificate.residual_norm, abs=1e-12)

    def test_perturbed_certificate_residual_grows_linearly(self):
        prob = agler.scalar_problem(FEASIBLE_POINTS, FEASIBLE_VALUES)
        rep = agler.solve_feasibility(prob, tol=1e-6)
        Ks = [K.copy() for K in rep.certificate.kernels]
        eps = 1e-3
        base = agler.apply_constraint(Ks, prob)
        Ks[0] = Ks[0] + eps * np.eye(2)
        bumped = agler.apply_constraint(Ks, prob)
        lam = np.asarray(FEASIBLE_POINTS, dtype=complex)
        predicted = eps * np.eye(2) * (1 - lam[:, 0:1] @ lam[:, 0:1].conj().T)
        predicted = eps * np.diag(1 - np.abs(lam[:, 0]) ** 2)
        assert np.max(np.abs((bumped - base)
                             - np.diag(eps * (1 - np.abs(lam[:, 0]) ** 2)))) \
            <= 1e-12

    def test_monotone_combined_distance(self):
        for pts, vals in [(FEASIBLE_POINTS, FEASIBLE_VALUES),
                          (INFEASIBLE_POINTS, INFEASIBLE_VALUES)]:
            prob = agler.scalar_problem(pts, vals)
            rep = agler.solve_feasibility(prob, tol=1e-6, max_iter=800,
                                          keep_history=True)
            h = rep.history
            assert all(h[k + 1] <= h[k] + 1e-10 for k in range(len(h) - 1))

    def test_zero_problem_zero_certificate(self):
        prob = agler.scalar_problem([[0.0, 0.0]], [0.0])
        Ks = [np.zeros((1, 1))] * 2
        res, eigs = agler.verify_certificate(prob, Ks)
        assert res == pytest.approx(1.0)  # rhs is 1, zero kernels miss it
        rep = agler.solve_feasibility(prob, tol=1e-8)
        assert rep.status == "feasible_with_certificate"

    def test_d1_equivalence_sample(self):
        rng = np.random.default_rng(4)
        agree = 0
        for t in range(10):
            lams = 0.6 * (rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2))
            if t % 2 == 0:
                s = oracle.sample_contractive_poly(1, 1, 2, "disk", seed=50 + t)
                vals = [oracle.eval_point(s, l)[0, 0] for l in lams]
            else:
                vals = list(2.0 * rng.uniform(0.6, 1.0, 2)
                            * np.exp(2j * np.pi * rng.uniform(0, 1, 2)))
            pick = disk.pick_fov(lams, [[[v]] for v in vals])
            prob = agler.scalar_problem(lams.reshape(-1, 1), vals)
            rep = agler.solve_feasibility(prob, tol=1e-6, max_iter=2000)
            if pick.verdict.is_psd:
                agree += rep.status == "feasible_with_certificate"
            else:
                agree += rep.status in ("infeasible_evidence", "unknown") \
                    if pick.min_eigenvalue > -1e-6 \
                    else rep.status == "infeasible_evidence"
        assert agree == 10

    def test_nc_d1_unique_affine_point_is_stein_kernel(self):
        rng = np.random.default_rng(5)
        T = [[contraction(rng, 2)] for _ in range(2)]
        X = [cg(rng, 2, 2) for _ in range(2)]
        Y = [cg(rng, 2, 2) * 0.2 for _ in range(2)]
        prob = agler.nc_ltoa_problem(T, X, Y)
        rep = agler.solve_feasibility(prob, tol=1e-6)
        pick = disk.pick_ltoa([t[0] for t in T], X, Y)
        if rep.status == "feasible_with_certificate":
            assert np.max(np.abs(rep.certificate.kernels[0] - pick.pick)) <= 1e-4
        assert (rep.status == "feasible_with_certificate") \
            == pick.verdict.is_psd

    def test_budget_guard(self):
        rng = np.random.default_rng(6)
        n, N = 8, 13  # 2 * (13 * 8)^2 = 21632 > 20000
        T = [[contraction(rng, n), contraction(rng, n)] for _ in range(N)]
        X = [cg(rng, n, 1) for _ in range(N)]
        with pytest.raises(BudgetError):
            agler.solve_feasibility(agler.nc_ltoa_problem(T, X, X))

    def test_nc_necessity_single_variable_embedding(self):
        rng = np.random.default_rng(7)
        s = oracle.sample_contractive_poly(2, 2, 2, "disk", seed=99)
        tuples, X, Y = [], [], []
        for i in range(2):
            T1 = contraction(rng, 2)
            T2 = contraction(rng, 2)
            Xi = cg(rng, 2, 2)
            tuples.append([T1, T2])
            X.append(Xi)
            Y.append(oracle.eval_ltoa(s, Xi, T1))
        prob = agler.nc_ltoa_problem(tuples, X, Y)
        rep = agler.solve_feasibility(prob, tol=1e-6)
        assert rep.status == "feasible_with_certificate"

    def test_point_domain_checks(self):
        with pytest.raises(DomainError):
            agler.scalar_problem([[1.0, 0.0]], [0.0])
        with pytest.raises(DomainError):
            agler.nc_ltoa_problem([[np.eye(2)]], [np.eye(2)], [np.eye(2)])

    def test_nc_rd_expansion_shapes(self):
        rng = np.random.default_rng(8)
        Z = [[contraction(rng, 2), contraction(rng, 2)]]
        W = [cg(rng, 2, 2) * 0.3]
        prob = agler.nc_rd_problem(Z, W)
        assert prob.conditions == 2  # N * kappa = 1 * 2
        R = agler.constraint_rhs(prob)
        e = np.eye(2, dtype=complex)
        for ip in range(2):
            for jp in range(2):
                E = e[:, ip:ip + 1] @ e[:, jp:jp + 1].conj().T
                expect = E - W[0] @ E @ W[0].conj().T
                blk = R[2 * ip:2 * ip + 2, 2 * jp:2 * jp + 2]
                assert np.max(np.abs(blk - expect)) <= 1e-14
        with pytest.raises(DimensionError):
            agler.nc_rd_problem(Z, W, basis_dim=3)
