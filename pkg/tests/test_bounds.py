import math

import numpy as np
import pytest

from bounds import (
    BoundReport,
    CertifiedBisection,
    MatrixSet,
    Method,
    build_cq_feasibility,
    build_sos_feasibility,
    canonical_rotation,
    check_cq_certificate,
    check_lift_cap,
    decompose_sos,
    decomposition_monomials,
    half_degree,
    initial_bracket,
    jsr_bracket,
    lifting_size_table,
    lower_bound_products,
    necklaces,
    quality_factor,
    rho_cq,
    rho_sos,
    rho_sr,
    run_bounds,
    sos_program_for_polynomial,
    word_product,
)
from config.matrix_sets import (
    QUARTIC_SOS_EXAMPLE,
    QUARTIC_SOS_MONOMIALS,
    THREE_MATRICES_CQ,
    THREE_MATRICES_LOWER,
    THREE_MATRICES_SOS,
    THREE_MATRICES_SR,
)
from linalg import spectral_radius
from lyapunov import SosCertificate, verify_certificate
from sdp import SdpSolution, SdpStatus, solve_feasibility
from utils.errors import BracketError, CertificateError, DimensionCapError, NumericalFailure


def fake_solution(status: SdpStatus, margin: float) -> SdpSolution:
    return SdpSolution((), 0.0, 0.0, 0.0, status, margin=margin)


def threshold_probe(threshold: float):
    calls = []

    def probe(gamma, eps):
        calls.append((gamma, eps))
        if gamma >= threshold:
            return fake_solution(SdpStatus.FEASIBLE, gamma - threshold)
        return fake_solution(SdpStatus.INFEASIBLE, gamma - threshold)

    probe.calls = calls
    return probe


class TestMatrixSet:
    def test_shapes(self, ando_shih):
        assert (ando_shih.n, ando_shih.m, len(ando_shih)) == (2, 2, 2)

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(ValueError):
            MatrixSet.of(np.eye(2), np.eye(3))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MatrixSet(())

    def test_lifted(self, ando_shih):
        lifted = ando_shih.lifted(2)
        assert lifted.n == 3
        assert lifted.name == "ando_shih^[2]"


class TestSpectralBounds:
    @pytest.mark.parametrize("two_d", [2, 4, 6, 8])
    def test_ando_shih(self, ando_shih, two_d):
        assert rho_sr(ando_shih, two_d) == pytest.approx(2.0 ** (1.0 / two_d), rel=1e-9)

    @pytest.mark.parametrize("two_d", [2, 4])
    def test_three_matrices(self, three_matrices, two_d):
        assert rho_sr(three_matrices, two_d) == pytest.approx(THREE_MATRICES_SR[two_d], abs=1e-3)

    @pytest.mark.slow
    def test_three_matrices_sextic(self, three_matrices):
        assert rho_sr(three_matrices, 6) == pytest.approx(THREE_MATRICES_SR[6], abs=1e-3)

    @pytest.mark.parametrize("two_d", [2, 4])
    def test_single_matrix(self, rng, two_d):
        A = rng.standard_normal((3, 3))
        assert rho_sr(MatrixSet.of(A), two_d) == pytest.approx(spectral_radius(A), rel=1e-8)

    def test_homogeneity(self, random_set):
        mset = random_set(3, 2)
        assert rho_sr(mset.scaled(2.5), 4) == pytest.approx(2.5 * rho_sr(mset, 4), rel=1e-9)

    @pytest.mark.parametrize("two_d", [0, 3, -2, 2.5])
    def test_rejects_odd_degree(self, ando_shih, two_d):
        with pytest.raises(ValueError):
            rho_sr(ando_shih, two_d)

    def test_half_degree(self):
        assert half_degree(6) == 3

    def test_lift_cap(self):
        with pytest.raises(DimensionCapError):
            check_lift_cap(10, 8, cap=1000)
        assert check_lift_cap(10, 2, cap=1000) == 55


class TestQualityAndSizes:
    @pytest.mark.parametrize(
        "d, expected",
        [(1, 0.707), (2, 0.840), (4, 0.917), (8, 0.957), (16, 0.978)],
    )
    def test_quality_factor_two_by_two(self, d, expected):
        assert quality_factor(2, 2, d) == pytest.approx(expected, abs=1e-3)

    def test_quality_factor_many_matrices(self):
        assert quality_factor(2, 1000, 2) == pytest.approx(3.0 ** -0.25)

    def test_quality_factor_range(self, rng):
        for n, m, d in rng.integers(1, 6, size=(10, 3)):
            assert 0.0 < quality_factor(int(n), int(m), int(d)) <= 1.0

    @pytest.mark.parametrize(
        "n, step, expected",
        [
            (10, 2, (10000, 1540, 715)),
            (10, 3, (10 ** 8, 1186570, 24310)),
            (2, 1, (4, 3, 3)),
        ],
    )
    def test_lifting_sizes(self, n, step, expected):
        row = lifting_size_table(n, step)[-1]
        assert (row.kron, row.semidef, row.symalg) == expected
        assert row.two_d == 2 ** step

    def test_symalg_size_for_degree_32(self):
        assert lifting_size_table(2, 5)[-1].symalg == 33

    def test_scalar_sizes(self):
        assert all((r.kron, r.semidef, r.symalg) == (1, 1, 1) for r in lifting_size_table(1, 4))


class TestProducts:
    def test_canonical_rotation(self):
        assert canonical_rotation((2, 0, 1)) == (0, 1, 2)
        assert canonical_rotation((1, 0, 1, 0)) == (0, 1, 0, 1)

    @pytest.mark.parametrize("m, k, count", [(2, 1, 2), (2, 2, 3), (2, 3, 4), (2, 4, 6), (3, 3, 11)])
    def test_necklace_counts(self, m, k, count):
        assert len(list(necklaces(m, k))) == count

    def test_word_product_order(self, ando_shih):
        np.testing.assert_allclose(word_product(ando_shih, (0, 1)), ando_shih.matrices[0] @ ando_shih.matrices[1])

    def test_three_matrices(self, three_matrices):
        value, witness = lower_bound_products(three_matrices, 2)
        assert value == pytest.approx(THREE_MATRICES_LOWER, abs=1e-4)
        assert witness == (1, 3)

    def test_single_letters(self, random_set):
        mset = random_set(3, 3)
        value, _ = lower_bound_products(mset, 1)
        assert value == pytest.approx(max(spectral_radius(A) for A in mset))

    def test_ando_shih(self, ando_shih):
        value, _ = lower_bound_products(ando_shih, 3)
        assert value == pytest.approx(1.0)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_lifted_set(self, random_set, k):
        mset = random_set(2, 2)
        lifted, _ = lower_bound_products(mset.lifted(2), k)
        base, _ = lower_bound_products(mset, k)
        assert lifted == pytest.approx(base ** 2, rel=1e-6)

    def test_cap(self, three_matrices):
        with pytest.raises(DimensionCapError):
            lower_bound_products(three_matrices, 6, cap=100)


class TestCertifiedBisection:
    def test_converges_on_certified_side(self):
        probe = threshold_probe(1.2345)
        result = CertifiedBisection(probe, tol=1e-6, eps_feas=1e-8).run(1.0, 2.0)
        assert result.value == result.hi
        assert result.hi >= 1.2345
        assert result.hi - result.lo <= 1e-6 * (1.0 + result.lo)
        assert result.probes == len(probe.calls)

    def test_expands_uncertified_upper_edge(self):
        result = CertifiedBisection(threshold_probe(1.21), tol=1e-4, eps_feas=1e-8).run(1.0, 1.2)
        assert result.hi >= 1.21
        assert result.hi == pytest.approx(1.21, rel=1e-3)

    def test_rejects_inverted_bracket(self):
        with pytest.raises(BracketError):
            CertifiedBisection(threshold_probe(1.0), tol=1e-4).run(2.0, 1.0)

    def test_decisive_failure_counts_as_infeasible(self):
        def probe(gamma, eps):
            if gamma >= 1.5:
                return fake_solution(SdpStatus.FEASIBLE, 0.1)
            return fake_solution(SdpStatus.NUMERICAL_FAILURE, -1.0)

        result = CertifiedBisection(probe, tol=1e-3, eps_feas=1e-8).run(1.0, 2.0)
        assert result.hi == pytest.approx(1.5, rel=2e-3)

    def test_retries_with_relaxed_tolerance(self):
        seen = []

        def probe(gamma, eps):
            seen.append(eps)
            if eps < 1e-7:
                return fake_solution(SdpStatus.NUMERICAL_FAILURE, 0.0)
            return fake_solution(SdpStatus.FEASIBLE if gamma >= 1.5 else SdpStatus.INFEASIBLE, gamma - 1.5)

        result = CertifiedBisection(probe, tol=1e-3, eps_feas=1e-8).run(1.0, 2.0)
        assert result.hi >= 1.5
        assert max(seen) == pytest.approx(1e-7)

    def test_unresolved_probe_raises(self):
        def probe(gamma, eps):
            return fake_solution(SdpStatus.NUMERICAL_FAILURE, 0.0)

        with pytest.raises(NumericalFailure) as info:
            CertifiedBisection(probe, tol=1e-3, eps_feas=1e-8).run(1.0, 2.0)
        assert info.value.gamma == 2.0

    def test_initial_bracket(self, three_matrices):
        lo, hi, sr = initial_bracket(three_matrices, 2, 1e-4)
        assert lo == pytest.approx(THREE_MATRICES_LOWER, abs=1e-4)
        assert sr == pytest.approx(THREE_MATRICES_SR[2], abs=1e-3)
        assert hi == pytest.approx(sr * (1.0 + 1e-3))


class TestSosProgram:
    def test_layout(self, ando_shih):
        prog = build_sos_feasibility(ando_shih, 4, 1.01)
        assert prog.block_sizes == (3, 3, 3)
        assert prog.num_constraints == 2 * 5 + 1

    def test_ando_shih_quartic_feasible(self, ando_shih):
        sol = solve_feasibility(build_sos_feasibility(ando_shih, 4, 1.01))
        assert sol.status is SdpStatus.FEASIBLE

    def test_ando_shih_quadratic_infeasible(self, ando_shih):
        sol = solve_feasibility(build_sos_feasibility(ando_shih, 2, 1.2))
        assert sol.status is SdpStatus.INFEASIBLE

    def test_zero_matrix_feasible(self):
        sol = solve_feasibility(build_sos_feasibility(MatrixSet.of(np.zeros((2, 2))), 4, 0.5))
        assert sol.status is SdpStatus.FEASIBLE

    def test_rejects_bad_gamma(self, ando_shih):
        with pytest.raises(ValueError):
            build_sos_feasibility(ando_shih, 2, 0.0)
        with pytest.raises(ValueError):
            build_sos_feasibility(ando_shih, 2, 1.0, inflation=-1.0)

    def test_cq_layout(self, three_matrices):
        prog = build_cq_feasibility(three_matrices, 4, 10.0)
        assert prog.block_sizes == (10, 10, 10, 10)
        assert prog.num_constraints == 3 * 55 + 1


class TestRhoSos:
    def test_ando_shih_quadratic(self, ando_shih):
        report = rho_sos(ando_shih, 2, tol=1e-5)
        assert report.method is Method.SOS
        assert report.value == pytest.approx(math.sqrt(2.0), rel=1e-4)
        assert report.bracket[1] == report.value
        assert report.quality_factor == pytest.approx(2.0 ** -0.5)

    def test_ando_shih_quartic(self, ando_shih):
        report = rho_sos(ando_shih, 4, tol=1e-3)
        assert 0.999 <= report.value <= 1.005
        assert report.quality_factor * report.value <= 1.0 + 1e-3
        cert = report.certificate
        assert isinstance(cert, SosCertificate)
        assert cert.gamma == report.value
        assert verify_certificate(ando_shih, cert).ok

    def test_single_stable_matrix(self):
        A = np.array([[0.5, 1.0], [0.0, 0.3]])
        report = rho_cq(MatrixSet.of(A), 2, tol=1e-4)
        assert report.value == pytest.approx(0.5, rel=2e-3)
        assert check_cq_certificate(MatrixSet.of(A), 2, report.value, report.certificate)

    def test_ando_shih_cq(self, ando_shih):
        report = rho_cq(ando_shih, 2, tol=1e-5)
        assert report.value == pytest.approx(math.sqrt(2.0), rel=1e-4)
        assert check_cq_certificate(ando_shih, 2, report.value, report.certificate)

    def test_nilpotent_set(self):
        mset = MatrixSet.of([[0.0, 1.0], [0.0, 0.0]])
        report = rho_sos(mset, 2, tol=1e-4)
        assert report.value == pytest.approx(0.0, abs=1e-4)
        assert report.certificate is None


class TestSuite:
    def test_report_order(self, ando_shih):
        reports = run_bounds(ando_shih, 2, [Method.SR, Method.LOWER], k_max=3)
        assert [r.method for r in reports] == [Method.LOWER, Method.SR]
        assert reports[0].witness is not None

    def test_bracket(self):
        reports = [
            BoundReport(Method.LOWER, 0.9, witness=(1,)),
            BoundReport(Method.SOS, 1.2, two_d=2, quality_factor=0.8),
            BoundReport(Method.SR, 1.5, two_d=2),
        ]
        lower, upper = jsr_bracket(reports)
        assert lower == pytest.approx(0.96)
        assert upper == pytest.approx(1.2)

    def test_empty_bracket(self):
        assert jsr_bracket([]) == (None, None)

    def test_report_round_trip(self):
        report = BoundReport(Method.CQ, 1.2, two_d=2, bracket=(1.1, 1.2), quality_factor=0.7,
                             certificate=np.eye(2), tolerances={"tol": 1e-6}, probes=7, elapsed=0.5)
        back = BoundReport.from_dict(report.to_dict())
        assert back.to_dict() == report.to_dict()
        assert "elapsed" not in report.to_dict(include_timing=False)

    @pytest.mark.slow
    @pytest.mark.parametrize("case", range(50))
    def test_ordering_chain(self, case):
        rng = np.random.default_rng(5000 + case)
        n, m, two_d = 2 + case % 2, 1 + case % 3, (2, 4)[case // 25]
        mset = MatrixSet.of(*(rng.uniform(-1.0, 1.0, size=(n, n)) for _ in range(m)))
        lower, sos, cq, sr = (r.value for r in run_bounds(mset, two_d, tol=1e-4))
        slack = 1e-3 * sr
        assert lower <= sos + slack
        assert sos <= cq + slack
        assert cq <= sr + slack
        if two_d == 2:
            assert abs(sos - cq) <= slack

    @pytest.mark.slow
    @pytest.mark.parametrize("n, two_d", [(2, 2), (2, 4), (3, 2), (3, 4)])
    def test_single_matrix_collapses(self, rng, n, two_d):
        A = rng.uniform(-1.0, 1.0, size=(n, n))
        rho = spectral_radius(A)
        for report in run_bounds(MatrixSet.of(A), two_d, tol=1e-5):
            assert report.value == pytest.approx(rho, rel=1e-3), report.method

    @pytest.mark.slow
    def test_lifted_cq_matches_quadratic_sos(self, random_set):
        mset = random_set(2, 2)
        cq = rho_cq(mset, 4, tol=1e-5).value
        sos = rho_sos(mset.lifted(2), 2, tol=1e-5).value
        assert cq ** 2 == pytest.approx(sos, rel=1e-3)

    @pytest.mark.slow
    def test_homogeneity(self, random_set):
        mset = random_set(2, 2)
        base = rho_sos(mset, 4, tol=1e-5).value
        scaled = rho_sos(mset.scaled(3.0), 4, tol=1e-5).value
        assert scaled == pytest.approx(3.0 * base, rel=1e-3)


@pytest.mark.slow
class TestPublishedValues:
    @pytest.mark.parametrize("two_d", [2, 4, 6])
    def test_sos(self, three_matrices, two_d):
        report = rho_sos(three_matrices, two_d, tol=1e-4)
        assert report.value == pytest.approx(THREE_MATRICES_SOS[two_d], abs=0.01)

    @pytest.mark.parametrize("two_d", [2, 4, 6])
    def test_cq(self, three_matrices, two_d):
        report = rho_cq(three_matrices, two_d, tol=1e-4)
        assert report.value == pytest.approx(THREE_MATRICES_CQ[two_d], abs=0.01)


class TestDecomposition:
    def test_program_size(self):
        prog = sos_program_for_polynomial(QUARTIC_SOS_EXAMPLE, QUARTIC_SOS_MONOMIALS)
        assert prog.block_sizes == (3,)
        assert prog.num_constraints == 5

    def test_quartic(self):
        decomp = decompose_sos(QUARTIC_SOS_EXAMPLE, QUARTIC_SOS_MONOMIALS)
        np.testing.assert_allclose(decomp.factor.T @ decomp.factor, decomp.gram, atol=1e-8)
        recovered = decomposition_monomials(decomp)
        for key in set(recovered) | set(QUARTIC_SOS_EXAMPLE):
            assert recovered.get(key, 0.0) == pytest.approx(QUARTIC_SOS_EXAMPLE.get(key, 0.0), abs=1e-6)
        assert 1 <= len(decomp.squares) <= 3
        assert decomp.min_eigenvalue >= -1e-8

    def test_not_sos(self):
        with pytest.raises(CertificateError) as info:
            decompose_sos({(4, 0): -1.0}, [(2, 0)])
        assert info.value.status == "infeasible"

    def test_rejects_mixed_variable_counts(self):
        with pytest.raises(ValueError):
            sos_program_for_polynomial({(2, 0): 1.0}, [(1, 0), (1, 0, 0)])
