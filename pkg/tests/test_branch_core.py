'''
Test branch_core.py.
'''

import math

import pytest

from branch_core import (
    ConsistencyError,
    DomainError,
    InfeasibleFlowError,
    angle_from_flow_coefficient,
    discriminant,
    dp_dmu,
    dq_drho,
    dsigma_dp,
    dsigma_drho,
    dsigma_dx,
    flow_coefficient,
    limiting_point,
    linearized_angle,
    make_impedance,
    power_candidates_from_flow_coefficient,
    power_from_flow_coefficient,
    receiving_q_both,
    receiving_q_exact,
    receiving_q_series,
    solve_branch,
    solve_branch_at_angle,
    support_coefficient,
    support_coefficient_series,
)
from numerics import central_difference

RHO_GRID = [0.0, 0.1, 0.5, 1.0, 2.0]
FRACTIONS = [0.01, 0.1, 0.5, 0.9, 0.999]


def branch(rho, x=0.1):
    return make_impedance(rho * x, x)


def feasible_points():
    for rho in RHO_GRID:
        imp = branch(rho)
        p_max = limiting_point(imp).p_max
        for fraction in FRACTIONS:
            yield imp, fraction * p_max


class TestImpedance:

    @pytest.mark.parametrize('r, x, rho', [
        (0.0, 0.1, 0.0),
        (0.05, 0.1, 0.5),
        (0.3, 0.1, 3.0),
    ])
    def test_ratio(self, r, x, rho):
        assert make_impedance(r, x).rho == pytest.approx(rho)

    @pytest.mark.parametrize('r, x', [
        (0.1, 0.0),
        (0.1, -0.2),
        (-0.01, 0.1),
        (float('nan'), 0.1),
        (0.0, float('inf')),
    ])
    def test_invalid(self, r, x):
        with pytest.raises(DomainError):
            make_impedance(r, x)

    def test_domain_error_is_value_error(self):
        with pytest.raises(ValueError):
            make_impedance(0.0, 0.0)

    def test_derived(self, lossy):
        assert lossy.z_squared == pytest.approx(0.0125)
        assert lossy.magnitude == pytest.approx(math.sqrt(0.0125))
        assert lossy.impedance_angle == pytest.approx(1.107149, abs=1e-6)


class TestDiscriminant:

    def test_values(self, lossless, lossy):
        assert discriminant(lossy, 1.0) == pytest.approx(0.859375)
        assert discriminant(lossless, 0.0) == 1.0
        assert discriminant(lossless, 10.0) == pytest.approx(0.0, abs=1e-15)

    def test_negative_power(self, lossless):
        with pytest.raises(DomainError):
            discriminant(lossless, -1.0)


class TestReceivingQ:

    def test_both_roots(self, lossless, lossy):
        assert receiving_q_both(lossless, 0.0) == pytest.approx((0.0, -20.0))
        practical, inverted = receiving_q_both(lossy, 1.0)
        assert practical == pytest.approx(-0.583802, abs=1e-6)
        assert inverted == pytest.approx(-15.416198, abs=1e-6)
        # sum and product of the roots
        assert practical + inverted == pytest.approx(-16.0)
        assert practical * inverted == pytest.approx(9.0)
        assert receiving_q_both(lossless, 10.0) == pytest.approx((-10.0, -10.0))

    def test_exact(self, lossless, lossy):
        assert receiving_q_exact(lossless, 1.0) == pytest.approx(-0.0501256, abs=1e-7)
        assert receiving_q_exact(lossy, 1.0) == pytest.approx(-0.583802, abs=1e-6)
        assert receiving_q_exact(lossy, 0.0) == 0.0

    def test_strictly_negative(self):
        for imp, p in feasible_points():
            assert receiving_q_exact(imp, p) < 0.0

    def test_small_flow_precision(self, lossless):
        # -(1/X)(1 - sqrt(1 - (XP)^2)) ~ -(X/2) P^2 without cancellation
        assert receiving_q_exact(lossless, 1e-6) == pytest.approx(-0.05e-12, rel=1e-9)

    def test_infeasible(self, lossless):
        with pytest.raises(InfeasibleFlowError):
            receiving_q_exact(lossless, 11.0)

    def test_series(self, lossless, lossy):
        assert receiving_q_series(lossless, 1.0) == pytest.approx(-0.05)
        assert receiving_q_series(lossy, 1.0) == pytest.approx(-0.5830078125)
        assert receiving_q_series(lossy, 0.0) == 0.0
        # defined beyond the limit as well
        assert receiving_q_series(lossless, 20.0) < 0.0

    def test_root_satisfies_flat_condition(self):
        for imp, p in feasible_points():
            q = receiving_q_exact(imp, p)
            residual = 2.0 * (imp.r * p + imp.x * q) + imp.z_squared * (p * p + q * q)
            assert abs(residual) < 1e-12


class TestSupportCoefficient:

    def test_values(self, lossless, lossy):
        assert support_coefficient(lossy, 0.0) == 0.0
        assert support_coefficient(lossy, 1.0) == pytest.approx(0.134083, abs=1e-6)
        assert support_coefficient(lossless, 10.0) == pytest.approx(2.0)

    def test_ratio_form(self):
        for imp, p in feasible_points():
            k = 1.0 + imp.rho ** 2
            expected = 2.0 / k * (-receiving_q_exact(imp, p) / p - imp.rho)
            assert support_coefficient(imp, p) == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_bounds(self):
        for imp, p in feasible_points():
            assert 0.0 < support_coefficient(imp, p) <= 2.0

    def test_series(self, lossless, lossy):
        assert support_coefficient_series(lossless, 1.0) == pytest.approx(0.1)
        assert support_coefficient_series(lossy, 1.0) == pytest.approx(0.1328125)
        assert support_coefficient_series(lossy, 0.0) == 0.0

    def test_increasing_in_power(self, rng):
        for rho in RHO_GRID:
            imp = branch(rho)
            p_max = limiting_point(imp).p_max
            powers = sorted(rng.uniform(0.0, p_max, 20))
            sigmas = [support_coefficient(imp, p) for p in powers]
            assert all(a < b for a, b in zip(sigmas, sigmas[1:]))

    def test_increasing_in_reactance(self):
        p = 0.5
        sigmas = [support_coefficient(branch(0.5, x), p) for x in (0.05, 0.1, 0.2, 0.4)]
        assert all(a < b for a, b in zip(sigmas, sigmas[1:]))

    def test_increasing_in_ratio(self):
        p = 0.5
        sigmas = [support_coefficient(branch(rho), p) for rho in (0.0, 0.25, 0.5, 1.0, 1.5)]
        assert all(a < b for a, b in zip(sigmas, sigmas[1:]))


class TestSeriesOrder:

    @pytest.mark.parametrize('rho', [0.0, 0.5, 1.0])
    def test_error_contracts_cubically(self, rho):
        xp_values = [0.04 / 2 ** i for i in range(5)]
        q_errors, sigma_errors = [], []
        for xp in xp_values:
            imp = branch(rho, xp)
            q_errors.append(abs(receiving_q_series(imp, 1.0) - receiving_q_exact(imp, 1.0)))
            sigma_errors.append(abs(support_coefficient_series(imp, 1.0) - support_coefficient(imp, 1.0)))

        for errors in (q_errors, sigma_errors):
            for coarse, fine in zip(errors[:-1], errors[1:]):
                assert 6.0 <= coarse / fine <= 10.0


class TestSolveBranch:

    def test_reference_point(self, lossy):
        point = solve_branch(lossy, 1.0)
        assert point.q_recv == pytest.approx(-0.583802, abs=1e-6)
        assert point.sigma == pytest.approx(0.134082, abs=1e-6)
        assert point.mu == pytest.approx(0.129190, abs=1e-6)
        assert point.p_send == pytest.approx(1.067041, abs=1e-6)
        assert point.q_send == pytest.approx(-0.449719, abs=1e-6)
        assert point.current_mag == pytest.approx(1.157940, abs=1e-6)
        assert point.phase_shift == pytest.approx(0.129551, abs=2e-6)
        assert point.losses == pytest.approx(0.067041, abs=1e-6)

    def test_lossless_limit(self, lossless):
        point = solve_branch(lossless, 10.0)
        assert point.q_recv == pytest.approx(-10.0)
        assert point.sigma == pytest.approx(2.0)
        assert point.mu == pytest.approx(1.0)
        assert point.phase_shift == pytest.approx(math.pi / 2)

    def test_quiescent(self, lossy):
        point = solve_branch(lossy, 0.0)
        assert point.p_send == point.q_recv == point.q_send == 0.0
        assert point.sigma == point.mu == point.phase_shift == point.current_mag == 0.0

    def test_infeasible(self, lossy):
        with pytest.raises(InfeasibleFlowError):
            solve_branch(lossy, 5.0)

    def test_tolerance_override(self, lossless):
        p = 10.0 * (1.0 + 1e-9)
        with pytest.raises(InfeasibleFlowError):
            solve_branch(lossless, p)
        assert solve_branch(lossless, p, tol=1e-6).sigma == pytest.approx(2.0, abs=1e-6)

    def test_invariants(self):
        for imp, p in feasible_points():
            pt = solve_branch(imp, p)
            assert pt.p_send >= pt.p_recv >= 0.0
            assert pt.losses == pytest.approx(imp.rho * pt.sigma * pt.p_recv, abs=1e-12)
            assert pt.current_mag ** 2 == pytest.approx(pt.p_recv ** 2 + pt.q_recv ** 2, rel=1e-9)
            assert pt.mu == pytest.approx(imp.x * pt.p_recv - imp.r * pt.q_recv, abs=1e-9)
            assert pt.mu == pytest.approx(imp.x * pt.p_send - imp.r * pt.q_send, abs=1e-9)
            assert math.sin(pt.phase_shift) == pytest.approx(pt.mu, abs=1e-9)
            assert 0.0 <= pt.mu <= 1.0

    def test_conservation(self):
        for imp, p in feasible_points():
            pt = solve_branch(imp, p)
            assert pt.q_send - pt.q_recv == pytest.approx(pt.sigma * pt.p_recv, abs=1e-12)
            assert pt.q_send - pt.q_recv == pytest.approx(imp.x * pt.current_mag ** 2, abs=1e-9)
            assert pt.p_send - pt.p_recv == pytest.approx(imp.r * pt.current_mag ** 2, abs=1e-9)

    def test_counter_flow(self):
        for imp, p in feasible_points():
            pt = solve_branch(imp, p)
            expected = -(imp.rho + 0.5 * imp.rho ** 2 * pt.sigma) * pt.p_recv
            assert pt.counter_flow_q == pytest.approx(expected, abs=1e-9)
            assert pt.q_recv == pytest.approx(-pt.symmetric_support + pt.counter_flow_q, abs=1e-12)
            assert pt.q_send == pytest.approx(pt.symmetric_support + pt.counter_flow_q, abs=1e-12)
            if imp.rho > 0.0:
                assert pt.counter_flow_q < 0.0

    def test_sigma_closed_forms(self):
        # mu = XP (1 + rho^2)(1 + rho sigma / 2)
        for imp, p in feasible_points():
            pt = solve_branch(imp, p)
            k = 1.0 + imp.rho ** 2
            assert pt.mu == pytest.approx(imp.x * p * k * (1.0 + 0.5 * imp.rho * pt.sigma), rel=1e-9)
            assert pt.q_send == pytest.approx(((1.0 - imp.rho ** 2) * pt.sigma / 2 - imp.rho) * p, abs=1e-9)


class TestSolveAtAngle:

    def test_matches_power_driven_solve(self):
        for imp, p in feasible_points():
            reference = solve_branch(imp, p)
            pt = solve_branch_at_angle(imp, reference.phase_shift)
            assert pt.p_recv == pytest.approx(p, rel=1e-8)
            assert pt.q_recv == pytest.approx(reference.q_recv, rel=1e-8)

    def test_at_impedance_angle(self, lossy):
        limit = limiting_point(lossy)
        pt = solve_branch_at_angle(lossy, lossy.impedance_angle)
        assert pt.p_recv == pytest.approx(limit.p_max, rel=1e-12)
        assert pt.q_recv == pytest.approx(limit.q_at_limit, rel=1e-12)
        assert pt.sigma == pytest.approx(limit.sigma_at_limit, rel=1e-12)

    def test_zero_angle(self, lossy):
        assert solve_branch_at_angle(lossy, 0.0).p_recv == 0.0

    @pytest.mark.parametrize('angle', [-0.1, 1.2, float('nan')])
    def test_out_of_range(self, lossy, angle):
        with pytest.raises(DomainError):
            solve_branch_at_angle(lossy, angle)


class TestFlowCoefficient:

    def test_values(self, lossless, lossy):
        assert flow_coefficient(lossless, 1.0) == pytest.approx(0.1)
        assert flow_coefficient(lossy, 1.0) == pytest.approx(0.129190, abs=1e-6)
        p_max = limiting_point(lossy).p_max
        assert flow_coefficient(lossy, p_max) == pytest.approx(1.0 / math.sqrt(1.25), abs=1e-6)

    def test_bound_chain(self):
        for imp, p in feasible_points():
            mu = flow_coefficient(imp, p)
            k = 1.0 + imp.rho ** 2
            assert imp.x * p <= mu + 1e-15
            assert mu - imp.x * p <= imp.rho / k + 1e-12

    def test_lossless_equals_xp(self):
        imp = branch(0.0)
        for p in (0.5, 2.0, 9.0):
            assert flow_coefficient(imp, p) == pytest.approx(imp.x * p, rel=1e-15)


class TestInverse:

    def test_values(self, lossless, lossy):
        assert power_from_flow_coefficient(lossless, 0.1) == pytest.approx(1.0)
        assert power_from_flow_coefficient(lossy, 1.0 / math.sqrt(1.25)) == pytest.approx(4.944272, abs=1e-6)
        assert power_from_flow_coefficient(lossy, flow_coefficient(lossy, 1.0)) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize('mu', [-0.01, 0.9, float('nan')])
    def test_out_of_range(self, lossy, mu):
        with pytest.raises(DomainError):
            power_from_flow_coefficient(lossy, mu)

    def test_clamped_within_tolerance(self, lossy):
        limit = limiting_point(lossy)
        p = power_from_flow_coefficient(lossy, limit.mu_at_limit + 1e-13)
        assert p == pytest.approx(limit.p_max, rel=1e-12)

    def test_discarded_root_violates_bound(self):
        for rho in RHO_GRID[1:]:
            imp = branch(rho)
            k = 1.0 + rho * rho
            for fraction in (0.1, 0.5, 0.9):
                mu = fraction * limiting_point(imp).mu_at_limit
                kept, discarded = power_candidates_from_flow_coefficient(imp, mu)
                assert mu - imp.x * kept <= rho / k + 1e-12
                assert mu - imp.x * discarded > rho / k

    def test_round_trip(self, rng):
        for _ in range(200):
            rho = rng.uniform(0.0, 3.0)
            imp = branch(rho, rng.uniform(0.01, 1.0))
            limit = limiting_point(imp)
            p = rng.uniform(0.01, 0.99) * limit.p_max
            assert power_from_flow_coefficient(imp, flow_coefficient(imp, p)) == pytest.approx(p, rel=1e-10)
            mu = rng.uniform(0.01, 0.99) * limit.mu_at_limit
            assert flow_coefficient(imp, power_from_flow_coefficient(imp, mu)) == pytest.approx(mu, rel=1e-10)

    def test_angle(self):
        assert angle_from_flow_coefficient(0.5) == pytest.approx(math.pi / 6)
        assert angle_from_flow_coefficient(1.0 + 1e-13) == pytest.approx(math.pi / 2)
        with pytest.raises(ConsistencyError):
            angle_from_flow_coefficient(1.1)

    def test_linearized_angle(self, lossless, lossy):
        assert linearized_angle(lossless, 1.0) == pytest.approx(0.1)
        # the exact angle always exceeds the linear estimate
        assert solve_branch(lossy, 1.0).phase_shift > linearized_angle(lossy, 1.0)


class TestLimitingPoint:

    def test_lossless(self):
        limit = limiting_point(make_impedance(0.0, 1.0))
        assert limit.p_max == pytest.approx(1.0)
        assert limit.q_at_limit == pytest.approx(-1.0)
        assert limit.sigma_at_limit == pytest.approx(2.0)
        assert limit.mu_at_limit == pytest.approx(1.0)
        assert limit.impedance_angle == pytest.approx(math.pi / 2)

    def test_equal_resistance_and_reactance(self):
        limit = limiting_point(make_impedance(1.0, 1.0))
        assert limit.mu_at_limit == pytest.approx(0.707107, abs=1e-6)
        assert limit.p_max == pytest.approx(0.207107, abs=1e-6)
        assert limit.q_at_limit == pytest.approx(-0.5)

    def test_lossy(self, lossy):
        limit = limiting_point(lossy)
        assert limit.p_max == pytest.approx(4.944272, abs=1e-6)
        assert limit.q_at_limit == pytest.approx(-8.0)
        assert limit.sigma_at_limit == pytest.approx(1.788854, abs=1e-6)
        assert limit.impedance_angle == pytest.approx(1.107149, abs=1e-6)
        assert limit.impedance_angle == pytest.approx(math.asin(limit.mu_at_limit))

    def test_identities(self, rng):
        for _ in range(100):
            rho = rng.uniform(0.0, 3.0)
            imp = branch(rho, rng.uniform(0.01, 1.0))
            limit = limiting_point(imp)
            root_k = math.sqrt(1.0 + rho * rho)
            assert limit.sigma_at_limit == pytest.approx(2.0 / root_k)
            assert limit.mu_at_limit == pytest.approx(1.0 / root_k)
            assert limit.p_max == pytest.approx((root_k - rho) / (imp.x * root_k ** 2))
            assert abs(discriminant(imp, limit.p_max)) < 1e-10
            # sigma at the limit exceeds 1 iff rho < sqrt(3)
            assert (limit.sigma_at_limit > 1.0) == (rho < math.sqrt(3.0))


class TestDerivatives:

    def test_values(self, lossless, lossy):
        assert dsigma_dp(lossless, 0.0) == pytest.approx(0.1)
        assert dsigma_dp(lossy, 1.0) == pytest.approx(0.144638, abs=1e-6)
        assert dp_dmu(lossless, 0.0) == pytest.approx(10.0)

    def test_small_flow_limit(self):
        for rho in RHO_GRID:
            imp = branch(rho)
            assert dsigma_dp(imp, 1e-9) == pytest.approx((1.0 + rho * rho) * imp.x, rel=1e-6)

    def test_zero_flow(self, lossy):
        assert dsigma_drho(lossy, 0.0) == 0.0
        assert dsigma_dx(lossy, 0.0) == 0.0
        assert dq_drho(lossy, 0.0) == 0.0

    def test_at_limit(self, lossless):
        with pytest.raises(DomainError):
            dsigma_dp(lossless, 10.0)
        with pytest.raises(DomainError):
            dp_dmu(lossless, 1.0)

    def test_against_finite_differences(self, rng):
        for _ in range(100):
            rho = rng.uniform(0.1, 2.0)
            x = rng.uniform(0.05, 1.0)
            imp = branch(rho, x)
            limit = limiting_point(imp)
            p = rng.uniform(0.05, 0.8) * limit.p_max
            mu = rng.uniform(0.05, 0.8) * limit.mu_at_limit

            assert dsigma_dp(imp, p) == pytest.approx(
                central_difference(lambda pp: support_coefficient(imp, pp), p), rel=1e-5)
            assert dsigma_drho(imp, p) == pytest.approx(
                central_difference(lambda rr: support_coefficient(branch(rr, x), p), rho), rel=1e-5)
            assert dsigma_dx(imp, p) == pytest.approx(
                central_difference(lambda xx: support_coefficient(branch(rho, xx), p), x), rel=1e-5)
            assert dq_drho(imp, p) == pytest.approx(
                central_difference(lambda rr: receiving_q_exact(branch(rr, x), p), rho), rel=1e-5)
            assert dp_dmu(imp, mu) == pytest.approx(
                central_difference(lambda mm: power_from_flow_coefficient(imp, mm), mu), rel=1e-5)

    def test_positive(self):
        for imp, p in feasible_points():
            if discriminant(imp, p) <= 0.0:
                continue
            assert dsigma_dp(imp, p) > 0.0
            assert dsigma_dx(imp, p) > 0.0
            if imp.rho > 0.0:
                assert dsigma_drho(imp, p) > 0.0
