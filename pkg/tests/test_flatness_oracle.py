import cmath
import math

import numpy as np
import pytest

from branch_core import limiting_point, make_impedance, receiving_q_exact, solve_branch
from errors import DomainError, InfeasibleFlowError
from flatness_oracle import (
    bisect_receiving_q,
    flat_residual,
    receiving_voltage_magnitude,
    reconstruct_phasors,
    residual_grid,
    sending_voltage_magnitude,
)


def grid_points():
    """rho x XP grid, XP in {0, 0.01, 0.1, 0.5, 0.9 of the limit} where feasible"""
    x = 0.1
    for rho in (0.0, 0.1, 0.5, 1.0, 2.0):
        imp = make_impedance(rho * x, x)
        xp_limit = x * limiting_point(imp).p_max
        for xp in (0.0, 0.01, 0.1, 0.5, 0.9 * xp_limit):
            if xp < xp_limit:
                yield imp, xp / x


class TestReconstructPhasors:

    def test_quiescent(self, lossless):
        state = reconstruct_phasors(lossless, 0.0, 0.0)
        assert state.v_send == 1 + 0j
        assert state.current == 0j
        assert state.v_recv == 1 + 0j

    def test_flat_solution(self, lossy):
        q = receiving_q_exact(lossy, 1.0)
        state = reconstruct_phasors(lossy, 1.0, q)
        assert cmath.isclose(abs(state.v_send), 1.0, abs_tol=1e-9)
        assert math.isclose(cmath.phase(state.v_send), 0.129552, abs_tol=1e-6)
        assert math.isclose(state.phase_shift, solve_branch(lossy, 1.0).phase_shift, abs_tol=1e-12)

    def test_non_flat_input(self, lossless):
        state = reconstruct_phasors(lossless, 1.0, 0.0)
        assert math.isclose(state.send_magnitude, math.sqrt(1.01), rel_tol=1e-12)
        assert state.send_magnitude > 1.0

    def test_ohms_law(self, lossy):
        state = reconstruct_phasors(lossy, 0.7, -0.3)
        assert cmath.isclose(state.v_send, state.v_recv + complex(0.05, 0.1) * state.current)
        assert cmath.isclose(state.current.conjugate() * state.v_recv, state.s_recv)

    def test_power_balance(self):
        for imp, p in grid_points():
            state = reconstruct_phasors(imp, p, receiving_q_exact(imp, p))
            consumed = complex(imp.r, imp.x) * abs(state.current) ** 2
            difference = state.s_send - state.s_recv
            assert abs(difference.real - consumed.real) < 1e-12
            assert abs(difference.imag - consumed.imag) < 1e-12

    @pytest.mark.parametrize('p, q', [(1.0, 0.0), (0.3, -0.8), (2.0, 0.5), (0.0, -1.0)])
    def test_flow_identity(self, lossy, p, q):
        # holds whether or not the profile is flat
        state = reconstruct_phasors(lossy, p, q)
        assert math.isclose(state.flow_coefficient, lossy.x * p - lossy.r * q, abs_tol=1e-14)

    def test_non_finite(self, lossy):
        with pytest.raises(DomainError):
            reconstruct_phasors(lossy, float('nan'), 0.0)


class TestFlatResidual:

    def test_values(self, lossless, lossy):
        assert flat_residual(lossy, 0.0, 0.0) == 0.0
        assert abs(flat_residual(lossy, 1.0, -0.583802)) < 1e-6
        assert abs(flat_residual(lossy, 1.0, receiving_q_exact(lossy, 1.0))) < 1e-12
        assert flat_residual(lossless, 1.0, 0.0) == pytest.approx(0.01)

    def test_matches_phasor_magnitude(self, lossy):
        for p, q in [(0.5, 0.2), (1.0, -1.0), (3.0, -4.0)]:
            state = reconstruct_phasors(lossy, p, q)
            assert flat_residual(lossy, p, q) == pytest.approx(abs(state.v_send) ** 2 - 1.0, abs=1e-12)

    def test_closed_form_on_grid(self):
        for imp, p in grid_points():
            assert abs(flat_residual(imp, p, receiving_q_exact(imp, p))) < 1e-10

    def test_grid_form(self, lossy):
        p_values = [0.0, 0.5, 1.0]
        q_values = [-1.0, 0.0, 0.5, 2.0]
        grid = residual_grid(lossy, p_values, q_values)
        assert grid.shape == (3, 4)
        expected = [[flat_residual(lossy, p, q) for q in q_values] for p in p_values]
        np.testing.assert_allclose(grid, expected, atol=1e-15)


class TestBisection:

    def test_lossless(self, lossless):
        assert bisect_receiving_q(lossless, 1.0) == pytest.approx(-0.0501256, abs=1e-7)
        assert bisect_receiving_q(lossless, 0.0) == 0.0

    def test_beyond_limit(self, lossless):
        with pytest.raises(InfeasibleFlowError) as excinfo:
            bisect_receiving_q(lossless, 11.0)
        assert excinfo.value.context is not None

    def test_negative_power(self, lossless):
        with pytest.raises(DomainError):
            bisect_receiving_q(lossless, -1.0)

    def test_agrees_with_closed_form(self):
        for imp, p in grid_points():
            assert abs(bisect_receiving_q(imp, p) - receiving_q_exact(imp, p)) < 1e-9

    def test_never_finds_inverted_root(self, lossy):
        vertex = -lossy.x / lossy.z_squared
        for p in (0.1, 1.0, 4.0):
            assert bisect_receiving_q(lossy, p) > vertex


class TestVoltageMagnitude:

    def test_no_load(self, lossy):
        assert receiving_voltage_magnitude(1.0, lossy, 0.0, 0.0) == pytest.approx((1.0, 0.0))

    def test_flat_solution_is_high_root(self, lossy):
        q = receiving_q_exact(lossy, 1.0)
        high, low = receiving_voltage_magnitude(1.0, lossy, 1.0, q)
        assert high == pytest.approx(1.0, abs=1e-9)
        assert low < high

    def test_uncompensated_branch(self, lossless):
        high, _ = receiving_voltage_magnitude(1.0, lossless, 1.0, 0.0)
        assert high == pytest.approx(0.994937, abs=1e-6)
        # cross-check with the phasors: |V_j| for the receiving voltage found
        v_k = high
        current = complex(1.0, 0.0).conjugate() / v_k
        v_j = v_k + complex(0.0, 0.1) * current
        assert abs(v_j) == pytest.approx(1.0, abs=1e-12)

    def test_both_directions(self):
        for imp, p in grid_points():
            if p == 0.0:
                continue
            pt = solve_branch(imp, p)
            recv_roots = receiving_voltage_magnitude(1.0, imp, pt.p_recv, pt.q_recv)
            send_roots = sending_voltage_magnitude(1.0, imp, pt.p_send, pt.q_send)
            assert min(abs(r - 1.0) for r in recv_roots) < 1e-9
            assert min(abs(r - 1.0) for r in send_roots) < 1e-9

    def test_sorted_descending(self, lossy):
        high, low = sending_voltage_magnitude(1.0, lossy, 1.2, 0.3)
        assert high >= low >= 0.0

    def test_no_real_root(self, lossless):
        with pytest.raises(InfeasibleFlowError):
            receiving_voltage_magnitude(1.0, lossless, 20.0, 0.0)

    def test_invalid_magnitude(self, lossy):
        with pytest.raises(DomainError):
            receiving_voltage_magnitude(0.0, lossy, 1.0, 0.0)
