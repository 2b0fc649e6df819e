"""
Flat-voltage Branch Solver
Closed-form AC power flow for one branch with |V_j| = |V_k| = 1 per-unit:
- Practical reactive-power root and its Taylor series
- Coefficient of support (sigma) and every derived quantity
- Limiting flow and impedance angle
- Exact power-angle relation and its inverse
- Analytic derivatives

All quantities are per-unit. Active power flows from the sending bus j to the
receiving bus k, so p_recv >= 0; reverse flows are modelled by swapping labels.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from config import TOLERANCES
from errors import ConsistencyError, DomainError, FlowError, InfeasibleFlowError

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = TOLERANCES['feasibility']
ARCSIN_CLAMP_TOL = TOLERANCES['arcsin_clamp']

__all__ = [
    'BranchImpedance', 'BranchOperatingPoint', 'FlowLimit',
    'FlowError', 'DomainError', 'InfeasibleFlowError', 'ConsistencyError',
    'make_impedance', 'discriminant', 'receiving_q_both', 'receiving_q_exact',
    'receiving_q_series', 'support_coefficient', 'support_coefficient_series',
    'solve_branch', 'solve_branch_at_angle', 'flow_coefficient',
    'power_from_flow_coefficient', 'power_candidates_from_flow_coefficient',
    'angle_from_flow_coefficient', 'linearized_angle', 'limiting_point',
    'dsigma_dp', 'dsigma_drho', 'dsigma_dx', 'dq_drho', 'dp_dmu',
]


@dataclass(frozen=True)
class BranchImpedance:
    """Series impedance r + jx of one branch (per-unit), with x > 0 and r >= 0"""
    r: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and math.isfinite(self.x)):
            raise DomainError(f"impedance must be finite, got r={self.r!r}, x={self.x!r}")
        if self.x <= 0.0:
            raise DomainError(f"series reactance must be positive, got x={self.x!r}")
        if self.r < 0.0:
            raise DomainError(f"series resistance must be non-negative, got r={self.r!r}")

    @property
    def rho(self) -> float:
        """R/X ratio"""
        return self.r / self.x

    @property
    def z_squared(self) -> float:
        return self.r * self.r + self.x * self.x

    @property
    def magnitude(self) -> float:
        return math.hypot(self.r, self.x)

    @property
    def impedance_angle(self) -> float:
        """arcsin(x / |Z|), computed as atan2(x, r)"""
        return math.atan2(self.x, self.r)


@dataclass(frozen=True)
class BranchOperatingPoint:
    """Complete flat-voltage solution of one branch"""
    p_recv: float
    q_recv: float
    p_send: float
    q_send: float
    current_mag: float
    sigma: float
    mu: float
    phase_shift: float
    losses: float

    @property
    def reactive_consumption(self) -> float:
        """sigma * P_k, the reactive power absorbed by the branch reactance"""
        return self.q_send - self.q_recv

    @property
    def symmetric_support(self) -> float:
        """(sigma / 2) * P_k, injected at both ends of a lossless branch"""
        return 0.5 * self.sigma * self.p_recv

    @property
    def counter_flow_q(self) -> float:
        """-(rho + rho^2 sigma / 2) * P_k, the Q flow superimposed against the P flow"""
        return 0.5 * (self.q_recv + self.q_send)


@dataclass(frozen=True)
class FlowLimit:
    """Limiting-flow state of a branch (discriminant exactly zero)"""
    p_max: float
    q_at_limit: float
    sigma_at_limit: float
    mu_at_limit: float
    impedance_angle: float


ZERO_POINT = BranchOperatingPoint(
    p_recv=0.0, q_recv=0.0, p_send=0.0, q_send=0.0, current_mag=0.0,
    sigma=0.0, mu=0.0, phase_shift=0.0, losses=0.0,
)


def make_impedance(r: float, x: float) -> BranchImpedance:
    """
    Build a validated branch impedance

    Args:
        r: Series resistance (per-unit, >= 0)
        x: Series reactance (per-unit, > 0)

    Returns:
        BranchImpedance

    Raises:
        DomainError: x <= 0, r < 0 or a non-finite input
    """
    return BranchImpedance(float(r), float(x))


def _check_power(p_recv: float) -> float:
    if not math.isfinite(p_recv) or p_recv < 0.0:
        raise DomainError(f"receiving-end power must be finite and non-negative, got {p_recv!r}")
    return float(p_recv)


def _scaled(imp: BranchImpedance, p_recv: float) -> Tuple[float, float, float]:
    """(rho, 1 + rho^2, X*P)"""
    rho = imp.rho
    return rho, 1.0 + rho * rho, imp.x * p_recv


def discriminant(imp: BranchImpedance, p_recv: float) -> float:
    """
    Discriminant under the square root of the practical Q_k root

    Delta = 1 - 2 rho (1 + rho^2)(XP) - (1 + rho^2)^2 (XP)^2.
    A negative value means the flow exceeds the flat-voltage limit.
    """
    p_recv = _check_power(p_recv)
    rho, k, t = _scaled(imp, p_recv)
    kt = k * t
    return 1.0 - 2.0 * rho * kt - kt * kt


def _root_discriminant(imp: BranchImpedance, p_recv: float, tol: float) -> float:
    delta = discriminant(imp, p_recv)
    if delta >= 0.0:
        return math.sqrt(delta)
    if delta < -tol:
        raise InfeasibleFlowError(
            f"receiving power {p_recv!r} exceeds the limiting flow "
            f"(discriminant {delta:.3e})"
        )
    logger.debug("discriminant %.3e clamped to zero at p_recv=%r", delta, p_recv)
    return 0.0


def _deficit(imp: BranchImpedance, p_recv: float, root_delta: float) -> float:
    """1 - sqrt(Delta), written as (1 - Delta) / (1 + sqrt(Delta))"""
    rho, k, t = _scaled(imp, p_recv)
    kt = k * t
    return (2.0 * rho * kt + kt * kt) / (1.0 + root_delta)


def receiving_q_both(imp: BranchImpedance, p_recv: float,
                     tol: float = FEASIBILITY_TOL) -> Tuple[float, float]:
    """
    Both roots of the flat-voltage quadratic in Q_k

    Returns:
        (practical root, inverted root); practical >= inverted, both <= 0

    Raises:
        InfeasibleFlowError: discriminant below -tol
    """
    p_recv = _check_power(p_recv)
    root = _root_discriminant(imp, p_recv, tol)
    rho, k, _ = _scaled(imp, p_recv)
    scale = imp.x * k
    practical = -_deficit(imp, p_recv, root) / scale + 0.0
    inverted = -(1.0 + root) / scale
    return practical, inverted


def receiving_q_exact(imp: BranchImpedance, p_recv: float,
                      tol: float = FEASIBILITY_TOL) -> float:
    """Practical receiving-end reactive power Q_k (0 at P = 0, negative otherwise)"""
    return receiving_q_both(imp, p_recv, tol)[0]


def receiving_q_series(imp: BranchImpedance, p_recv: float) -> float:
    """
    Series form of Q_k valid for XP << 1

    Q_k ~ -P [rho + ((1+rho^2)^2 / 2) XP + (rho (1+rho^2)^3 / 2) (XP)^2],
    remainder O((XP)^3) * P. No feasibility check.
    """
    p_recv = _check_power(p_recv)
    rho, k, t = _scaled(imp, p_recv)
    bracket = rho + 0.5 * k * k * t + 0.5 * rho * k ** 3 * t * t
    return -p_recv * bracket + 0.0


def _sigma_from_flows(imp: BranchImpedance, p_recv: float, q_recv: float) -> float:
    # X |I|^2 / P with |I|^2 = P^2 + Q^2 on the flat profile
    return imp.x * (p_recv + q_recv * q_recv / p_recv)


def support_coefficient(imp: BranchImpedance, p_recv: float,
                        tol: float = FEASIBILITY_TOL) -> float:
    """
    Coefficient of support sigma = X |I|^2 / P_k (0 when P_k = 0)

    Equal to (2 / (1 + rho^2)) ((-Q_k) / P_k - rho); always in [0, 2].
    """
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return 0.0
    q_recv = receiving_q_exact(imp, p_recv, tol)
    return _sigma_from_flows(imp, p_recv, q_recv)


def support_coefficient_series(imp: BranchImpedance, p_recv: float) -> float:
    """Two-term series sigma ~ (1+rho^2) XP + rho (1+rho^2)^2 (XP)^2"""
    p_recv = _check_power(p_recv)
    rho, k, t = _scaled(imp, p_recv)
    return k * t + rho * k * k * t * t


def _clamp_unit(mu: float) -> float:
    if abs(mu) <= 1.0:
        return mu
    if abs(mu) > 1.0 + ARCSIN_CLAMP_TOL:
        raise ConsistencyError(f"flow coefficient {mu!r} lies outside [-1, 1]")
    logger.debug("flow coefficient %r clamped to unit interval", mu)
    return math.copysign(1.0, mu)


def _phase_from_components(sin_part: float, cos_part: float) -> float:
    """Angle of V_j V_k* from its imaginary (mu) and real parts"""
    if cos_part < 0.0:
        if cos_part < -ARCSIN_CLAMP_TOL:
            raise ConsistencyError(f"phase shift beyond pi/2 (cos part {cos_part!r})")
        cos_part = 0.0
    return math.atan2(sin_part, cos_part)


def _assemble_point(imp: BranchImpedance, p_recv: float, q_recv: float,
                    mu: float, phase_shift: float) -> BranchOperatingPoint:
    sigma = _sigma_from_flows(imp, p_recv, q_recv)
    losses = imp.rho * sigma * p_recv
    return BranchOperatingPoint(
        p_recv=p_recv,
        q_recv=q_recv,
        p_send=p_recv + losses,
        q_send=q_recv + sigma * p_recv,
        current_mag=math.sqrt(sigma * p_recv / imp.x),
        sigma=sigma,
        mu=mu,
        phase_shift=phase_shift,
        losses=losses,
    )


def solve_branch(imp: BranchImpedance, p_recv: float,
                 tol: float = FEASIBILITY_TOL) -> BranchOperatingPoint:
    """
    Full flat-voltage solution of a branch given its receiving-end power

    Args:
        imp: Branch impedance
        p_recv: Receiving-end active power P_k (per-unit, >= 0)
        tol: Feasibility tolerance on the discriminant

    Returns:
        BranchOperatingPoint (all zero at P_k = 0)

    Raises:
        DomainError: p_recv negative or not finite
        InfeasibleFlowError: P_k beyond the limiting flow
    """
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return ZERO_POINT

    root = _root_discriminant(imp, p_recv, tol)
    deficit = _deficit(imp, p_recv, root)
    rho, k, t = _scaled(imp, p_recv)

    q_recv = -deficit / (imp.x * k)
    if root == 0.0:
        # limiting flow: mu and the phase shift take their limiting values
        return _assemble_point(imp, p_recv, q_recv, 1.0 / math.sqrt(k), imp.impedance_angle)

    mu = _clamp_unit(t + rho * deficit / k)
    cos_part = 1.0 + imp.r * p_recv + imp.x * q_recv
    return _assemble_point(imp, p_recv, q_recv, mu, _phase_from_components(mu, cos_part))


def solve_branch_at_angle(imp: BranchImpedance, phase_shift: float,
                          tol: float = FEASIBILITY_TOL) -> BranchOperatingPoint:
    """
    Flat-voltage solution of a branch given the bus phase shift delta_j - delta_k

    Well conditioned right up to the limiting flow, where the P-driven
    solve loses half its digits.

    Raises:
        DomainError: phase_shift negative, not finite, or beyond the impedance angle
    """
    if not math.isfinite(phase_shift) or phase_shift < 0.0:
        raise DomainError(f"phase shift must be finite and non-negative, got {phase_shift!r}")
    limit = imp.impedance_angle
    if phase_shift > limit:
        if phase_shift > limit + tol:
            raise DomainError(
                f"phase shift {phase_shift!r} exceeds the impedance angle {limit!r}"
            )
        phase_shift = limit
    if phase_shift == 0.0:
        return ZERO_POINT

    rho, k, _ = _scaled(imp, 0.0)
    mu = math.sin(phase_shift)
    half = math.sin(0.5 * phase_shift)
    one_minus_cos = 2.0 * half * half

    p_recv = max((mu - rho * one_minus_cos) / (imp.x * k), 0.0)
    if p_recv == 0.0:
        return ZERO_POINT
    q_recv = -(one_minus_cos + imp.r * p_recv) / imp.x
    return _assemble_point(imp, p_recv, q_recv, mu, phase_shift)


def flow_coefficient(imp: BranchImpedance, p_recv: float,
                     tol: float = FEASIBILITY_TOL) -> float:
    """
    Flow coefficient mu = X P_k - R Q_k = sin(delta_j - delta_k)

    Satisfies X P <= mu <= X P + rho / (1 + rho^2).
    """
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return 0.0
    root = _root_discriminant(imp, p_recv, tol)
    rho, k, t = _scaled(imp, p_recv)
    if root == 0.0:
        return 1.0 / math.sqrt(k)
    return _clamp_unit(t + rho * _deficit(imp, p_recv, root) / k)


def _check_flow_coefficient(imp: BranchImpedance, mu: float, tol: float) -> float:
    if not math.isfinite(mu) or mu < 0.0:
        raise DomainError(f"flow coefficient must be finite and non-negative, got {mu!r}")
    limit = 1.0 / math.sqrt(1.0 + imp.rho ** 2)
    if mu > limit:
        if mu > limit + tol:
            raise DomainError(
                f"flow coefficient {mu!r} exceeds the limiting value {limit!r}; "
                f"no flat-voltage solution"
            )
        mu = limit
    return float(mu)


def power_candidates_from_flow_coefficient(imp: BranchImpedance, mu: float,
                                           tol: float = FEASIBILITY_TOL) -> Tuple[float, float]:
    """
    Both roots P_k of the squared power-angle relation

    Returns:
        (kept root, discarded root). Only the kept root satisfies
        mu - X P <= rho / (1 + rho^2); the discarded one enters when the
        square root is cleared.
    """
    mu = _check_flow_coefficient(imp, mu, tol)
    rho, k, _ = _scaled(imp, 0.0)
    cos_delta = math.sqrt((1.0 - mu) * (1.0 + mu))
    scale = imp.x * k
    kept = (mu - rho * mu * mu / (1.0 + cos_delta)) / scale
    discarded = (mu - rho * (1.0 + cos_delta)) / scale
    return kept, discarded


def power_from_flow_coefficient(imp: BranchImpedance, mu: float,
                                tol: float = FEASIBILITY_TOL) -> float:
    """
    Unique P_k for a given flow coefficient

    P_k = (1/X) / (1 + rho^2) * [mu - rho (1 - sqrt(1 - mu^2))]

    Raises:
        DomainError: mu < 0 or mu above 1 / sqrt(1 + rho^2) by more than tol
    """
    return power_candidates_from_flow_coefficient(imp, mu, tol)[0]


def angle_from_flow_coefficient(mu: float) -> float:
    """arcsin(mu), clamping |mu| up to 1 + arcsin tolerance"""
    if not math.isfinite(mu):
        raise DomainError(f"flow coefficient must be finite, got {mu!r}")
    return math.asin(_clamp_unit(mu))


def linearized_angle(imp: BranchImpedance, p_recv: float) -> float:
    """X * P_k, the linearised (DC power flow) angle estimate; comparison only"""
    return imp.x * _check_power(p_recv)


def limiting_point(imp: BranchImpedance) -> FlowLimit:
    """Maximal flat-voltage receiving power and the state at that limit"""
    rho = imp.rho
    k = 1.0 + rho * rho
    root_k = math.sqrt(k)
    return FlowLimit(
        # (sqrt(k) - rho) / k == 1 / (k (sqrt(k) + rho))
        p_max=1.0 / (imp.x * k * (root_k + rho)),
        q_at_limit=-1.0 / (imp.x * k),
        sigma_at_limit=2.0 / root_k,
        mu_at_limit=1.0 / root_k,
        impedance_angle=imp.impedance_angle,
    )


def _interior_root(imp: BranchImpedance, p_recv: float) -> float:
    delta = discriminant(imp, p_recv)
    if delta <= 0.0:
        raise DomainError(
            f"derivative undefined at or beyond the limiting flow (p_recv={p_recv!r})"
        )
    return math.sqrt(delta)


def dsigma_dp(imp: BranchImpedance, p_recv: float) -> float:
    """d sigma / d P_k = sigma / (P sqrt(Delta)); (1 + rho^2) X at P = 0"""
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return (1.0 + imp.rho ** 2) * imp.x
    root = _interior_root(imp, p_recv)
    return support_coefficient(imp, p_recv) / (p_recv * root)


def dsigma_drho(imp: BranchImpedance, p_recv: float) -> float:
    """d sigma / d rho at fixed X, P: (2X / sqrt(Delta)) (1 + rho sigma) (-Q_k)"""
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return 0.0
    root = _interior_root(imp, p_recv)
    point = solve_branch(imp, p_recv)
    return 2.0 * imp.x / root * (1.0 + imp.rho * point.sigma) * (-point.q_recv)


def dsigma_dx(imp: BranchImpedance, p_recv: float) -> float:
    """d sigma / d X at fixed rho, P: sigma / (X sqrt(Delta))"""
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return 0.0
    root = _interior_root(imp, p_recv)
    return support_coefficient(imp, p_recv) / (imp.x * root)


def dq_drho(imp: BranchImpedance, p_recv: float) -> float:
    """d Q_k / d rho at fixed X, P: -(P / sqrt(Delta)) (1 + rho sigma)"""
    p_recv = _check_power(p_recv)
    if p_recv == 0.0:
        return 0.0
    root = _interior_root(imp, p_recv)
    return -p_recv / root * (1.0 + imp.rho * support_coefficient(imp, p_recv))


def dp_dmu(imp: BranchImpedance, mu: float) -> float:
    """d P_k / d mu = (1/X) / (1 + rho^2) * (1 - rho mu / sqrt(1 - mu^2)), mu below its limit"""
    rho = imp.rho
    k = 1.0 + rho * rho
    limit = 1.0 / math.sqrt(k)
    if not math.isfinite(mu) or mu < 0.0 or mu >= limit:
        raise DomainError(f"flow coefficient {mu!r} outside [0, {limit!r})")
    cos_delta = math.sqrt((1.0 - mu) * (1.0 + mu))
    return (1.0 - rho * mu / cos_delta) / (imp.x * k)


if __name__ == "__main__":
    print("Testing flat-voltage branch solver...")

    imp = make_impedance(0.05, 0.1)
    point = solve_branch(imp, 1.0)
    print(f"\nBranch r=0.05, x=0.1, P_k=1.0:")
    print(f"  Q_k:          {point.q_recv:.6f}")
    print(f"  Q_j:          {point.q_send:.6f}")
    print(f"  P_j:          {point.p_send:.6f}")
    print(f"  sigma:        {point.sigma:.6f}")
    print(f"  mu:           {point.mu:.6f}")
    print(f"  phase shift:  {point.phase_shift:.6f} rad")

    limit = limiting_point(imp)
    print(f"\nLimiting flow: P_max={limit.p_max:.6f}, Q={limit.q_at_limit:.6f}, "
          f"sigma={limit.sigma_at_limit:.6f}, angle={limit.impedance_angle:.6f} rad")
    print(f"Inverse at mu={point.mu:.6f}: P_k={power_from_flow_coefficient(imp, point.mu):.6f}")
