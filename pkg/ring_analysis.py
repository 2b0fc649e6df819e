"""
String and Ring Networks under a Flat Voltage Profile
- Per-unit conversion
- String (radial chain) solution with per-bus angles and injections
- Winding-number certificate for closed cycles
- Homogeneous-ring circulating power and its R/X feasibility limit
- Limit table over ring sizes
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from branch_core import (
    BranchImpedance,
    BranchOperatingPoint,
    make_impedance,
    solve_branch,
    solve_branch_at_angle,
)
from config import SWEEP_DEFAULTS, TABLE_DEFAULTS, TOLERANCES
from errors import ConsistencyError, DomainError, InfeasibleFlowError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MAX_BRANCH_ANGLE = 0.5 * math.pi

UNIT_KINDS = ('impedance', 'power', 'voltage')


# =============================================================================
# PER-UNIT SYSTEM
# =============================================================================

@dataclass(frozen=True)
class PerUnitBase:
    """Per-unit system defined by a nominal voltage (V) and a power base (VA)"""
    v_nom: float
    s_base: float

    def __post_init__(self):
        for name in ('v_nom', 's_base'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @property
    def z_base(self) -> float:
        """Impedance base V_nom^2 / S_base (ohms)"""
        return self.v_nom * self.v_nom / self.s_base

    def base_for(self, kind: str) -> float:
        if kind == 'impedance':
            return self.z_base
        if kind == 'power':
            return self.s_base
        if kind == 'voltage':
            return self.v_nom
        raise DomainError(f"unknown quantity kind {kind!r}, expected one of {UNIT_KINDS}")


def to_per_unit(value_si: float, base: PerUnitBase, kind: str) -> float:
    """SI value (ohms, W/var/VA or V) to per-unit"""
    return value_si / base.base_for(kind)


def from_per_unit(value_pu: float, base: PerUnitBase, kind: str) -> float:
    """Per-unit value back to SI"""
    return value_pu * base.base_for(kind)


# =============================================================================
# STRING NETWORKS
# =============================================================================

@dataclass(frozen=True)
class StringNetwork:
    """
    Chain of branches, bus 0 (head) -> bus n (tail)

    Attributes:
        branches: Branch impedances in downstream order
        injections: Active power injected at each intermediate bus 1..n-1
        tail_power: Power received at the tail bus
    """
    branches: Tuple[BranchImpedance, ...]
    injections: Tuple[float, ...] = ()
    tail_power: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'branches', tuple(self.branches))
        object.__setattr__(self, 'injections', tuple(float(v) for v in self.injections))
        if not self.branches:
            raise DomainError("a string network needs at least one branch")
        if len(self.injections) != len(self.branches) - 1:
            raise DomainError(
                f"{len(self.branches)} branches need {len(self.branches) - 1} "
                f"intermediate injections, got {len(self.injections)}"
            )
        if not all(math.isfinite(v) for v in self.injections):
            raise DomainError("injections must be finite")
        if not math.isfinite(self.tail_power) or self.tail_power < 0.0:
            raise DomainError(f"tail power must be finite and non-negative, got {self.tail_power!r}")


@dataclass
class StringSolution:
    """Solved string: one operating point per branch, angles and injections per bus"""
    points: List[BranchOperatingPoint]
    bus_angles: List[float]
    bus_p_injection: List[float]
    bus_q_injection: List[float]

    @property
    def total_angle_drop(self) -> float:
        return self.bus_angles[0] - self.bus_angles[-1]

    def to_frame(self) -> pd.DataFrame:
        """Per-bus report; p_out / q_out are the flows sent into the downstream branch"""
        n_bus = len(self.bus_angles)
        p_out = [pt.p_send for pt in self.points] + [0.0]
        q_out = [pt.q_send for pt in self.points] + [0.0]
        return pd.DataFrame({
            'bus': range(n_bus),
            'angle': self.bus_angles,
            'p_injection': self.bus_p_injection,
            'q_injection': self.bus_q_injection,
            'p_out': p_out,
            'q_out': q_out,
        })


def solve_string(net: StringNetwork, tol: float = TOLERANCES['feasibility']) -> StringSolution:
    """
    Solve a string network from the tail upstream

    The sending power of each branch is the receiving power of the branch
    upstream of it plus the injection at the bus in between. Bus 0 is the
    angle reference.

    Args:
        net: String network
        tol: Feasibility tolerance passed to each branch solve

    Returns:
        StringSolution

    Raises:
        InfeasibleFlowError: first branch (from the tail) with a negative or
            infeasible receiving power
    """
    n = len(net.branches)
    points: List[Optional[BranchOperatingPoint]] = [None] * n

    p_recv = net.tail_power
    for i in range(n - 1, -1, -1):
        context = f"string branch {i} (bus {i} -> bus {i + 1})"
        if p_recv < 0.0:
            raise InfeasibleFlowError(
                f"implied receiving power {p_recv!r} reverses the flow", context=context
            )
        try:
            points[i] = solve_branch(net.branches[i], p_recv, tol)
        except InfeasibleFlowError as exc:
            raise InfeasibleFlowError(str(exc), context=context) from exc
        if i > 0:
            p_recv = points[i].p_send - net.injections[i - 1]

    angles = [0.0]
    for point in points:
        angles.append(angles[-1] - point.phase_shift)

    p_injection = [points[0].p_send] + list(net.injections) + [-net.tail_power]
    q_injection = [points[0].q_send]
    for upstream, downstream in zip(points[:-1], points[1:]):
        q_injection.append(downstream.q_send - upstream.q_recv)
    q_injection.append(-points[-1].q_recv)

    logger.debug("string of %d branches solved, angle drop %.6f rad", n, -angles[-1])
    return StringSolution(
        points=points,
        bus_angles=angles,
        bus_p_injection=p_injection,
        bus_q_injection=q_injection,
    )


# =============================================================================
# WINDING NUMBER
# =============================================================================

@dataclass(frozen=True)
class WindingResult:
    """Sum of the angle steps around a cycle and its nearest winding number"""
    total: float
    m: int
    consistent: bool
    mismatch: float


def winding_sum(angle_diffs: Sequence[float], max_step: Optional[float] = None,
                tol: float = TOLERANCES['winding']) -> WindingResult:
    """
    Sum angle differences around a cycle and certify an integer winding

    Args:
        angle_diffs: δ_{k-1} − δ_k for each branch, each in (−π, π]
        max_step: Optional upper bound on every step (π/2 for practical branches)
        tol: Largest |sum − 2πm| accepted as an integer winding

    Returns:
        WindingResult; consistent is False when the mismatch exceeds tol

    Raises:
        DomainError: a step outside (−π, π] or above max_step
    """
    steps = [float(d) for d in angle_diffs]
    for i, step in enumerate(steps):
        if not math.isfinite(step) or not -math.pi < step <= math.pi:
            raise DomainError(f"angle step {i} = {step!r} lies outside (-pi, pi]")
        if max_step is not None and step > max_step + tol:
            raise DomainError(f"angle step {i} = {step!r} exceeds {max_step!r}")

    total = math.fsum(steps)
    m = int(round(total / TWO_PI))
    mismatch = abs(total - TWO_PI * m)
    consistent = mismatch <= tol
    if not consistent:
        logger.debug("cycle sum %.12f is %.3e away from 2*pi*%d", total, mismatch, m)
    return WindingResult(total=total, m=m, consistent=consistent, mismatch=mismatch)


@dataclass
class RingFlowCheck:
    """Verification of given per-branch flows around a ring"""
    points: List[BranchOperatingPoint]
    angle_steps: List[float]
    winding: WindingResult
    p_circ: float

    @property
    def consistent(self) -> bool:
        return self.winding.consistent


def check_ring_flows(branches: Sequence[BranchImpedance], p_recv: Sequence[float],
                     tol: float = TOLERANCES['feasibility']) -> RingFlowCheck:
    """
    Solve every branch of a ring at its given receiving power and check that
    the angle steps close the cycle with an integer winding number

    The circulating power is reported as the smallest branch flow.
    """
    if len(branches) != len(p_recv):
        raise DomainError(f"{len(branches)} branches but {len(p_recv)} flows")
    if len(branches) < 2:
        raise DomainError("a ring needs at least two branches")

    points = []
    for i, (imp, p) in enumerate(zip(branches, p_recv)):
        try:
            points.append(solve_branch(imp, p, tol))
        except InfeasibleFlowError as exc:
            raise InfeasibleFlowError(str(exc), context=f"ring branch {i}") from exc

    steps = [pt.phase_shift for pt in points]
    return RingFlowCheck(
        points=points,
        angle_steps=steps,
        winding=winding_sum(steps, max_step=MAX_BRANCH_ANGLE),
        p_circ=min(pt.p_recv for pt in points),
    )


# =============================================================================
# HOMOGENEOUS RINGS
# =============================================================================

def _check_ring_size(n: int, m: int):
    if isinstance(n, bool) or isinstance(m, bool) or int(n) != n or int(m) != m:
        raise DomainError(f"ring size and winding number must be integers, got n={n!r}, m={m!r}")
    if n < 4:
        raise DomainError(f"a ring needs at least 4 branches, got n={n}")
    if not 1 <= m <= n // 4:
        raise DomainError(f"winding number must lie in [1, {n // 4}] for n={n}, got m={m}")


def _ring_angle(n: int, m: int) -> float:
    _check_ring_size(n, m)
    return TWO_PI * m / n


def homogeneous_mu(n: int, m: int) -> float:
    """Flow coefficient sin(2πm/n) shared by every branch of a homogeneous ring"""
    return math.sin(_ring_angle(n, m))


def rho_max(n: int, m: int) -> float:
    """Largest R/X ratio admitting a flat circulating flow: sqrt(1/μ² − 1)"""
    theta = _ring_angle(n, m)
    if 4 * m == n:
        return 0.0
    # sqrt(1/sin^2 - 1) == cot for angles below pi/2
    return max(math.cos(theta) / math.sin(theta), 0.0)


def _check_branch_values(x: float, rho: float):
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"branch reactance must be positive, got x={x!r}")
    if not math.isfinite(rho) or rho < 0.0:
        raise DomainError(f"R/X ratio must be non-negative, got rho={rho!r}")


def circulating_power(x: float, rho: float, n: int, m: int,
                      tol: float = TOLERANCES['feasibility']) -> float:
    """
    Circulating power of a homogeneous ring

    P∘ = (1/X) / (1 + ρ²) · [sin θ − ρ (1 − cos θ)] with θ = 2πm/n.

    Raises:
        DomainError: invalid x, rho, n or m
        InfeasibleFlowError: rho above rho_max(n, m) by more than tol
    """
    _check_branch_values(x, rho)
    limit = rho_max(n, m)
    if rho > limit:
        if rho > limit + tol:
            raise InfeasibleFlowError(
                f"R/X ratio {rho!r} exceeds the ring limit {limit:.6f}",
                context=f"ring n={n} m={m}",
            )
        logger.debug("rho %r accepted within tolerance of ring limit %r", rho, limit)

    theta = TWO_PI * m / n
    half = math.sin(0.5 * theta)
    return (math.sin(theta) - rho * 2.0 * half * half) / (x * (1.0 + rho * rho))


def circulating_power_lossless(x: float, n: int, m: int) -> float:
    """Lossless circulating power sin(2πm/n) / X"""
    _check_branch_values(x, 0.0)
    return homogeneous_mu(n, m) / x


@dataclass(frozen=True)
class RingSpec:
    """
    Homogeneous ring: n identical branches, winding number m

    Construction checks the ring size and branch values only; rho <= rho_max(n, m)
    is checked when the ring is assembled, which raises InfeasibleFlowError.
    """
    n: int
    m: int
    x: float
    rho: float

    def __post_init__(self):
        _check_ring_size(self.n, self.m)
        _check_branch_values(self.x, self.rho)

    @property
    def impedance(self) -> BranchImpedance:
        return make_impedance(self.rho * self.x, self.x)

    @property
    def branch_angle(self) -> float:
        return TWO_PI * self.m / self.n


@dataclass
class RingSolution:
    """Solved homogeneous ring; injections are attributed to each branch's receiving bus"""
    spec: RingSpec
    operating_point: BranchOperatingPoint
    p_circ: float
    mu: float
    sigma: float
    per_branch_q_consumption: float
    per_branch_losses: float
    per_bus_p_injection: float
    per_bus_q_injection: float
    angle_steps: List[float] = field(default_factory=list)
    winding_check: int = 0

    @property
    def counter_flow_q(self) -> float:
        """Circulating Q flowing against P∘: −(ρ + ρ²σ/2) P∘"""
        rho = self.spec.rho
        return -(rho + 0.5 * rho * rho * self.sigma) * self.p_circ


def assemble_homogeneous_ring(spec: RingSpec,
                              tol: float = TOLERANCES['feasibility']) -> RingSolution:
    """
    Build the circulating-flow state of a homogeneous ring

    Each branch carries the same angle step 2πm/n, so each branch is solved
    from its phase shift. Every bus replaces the losses and supplies the
    reactive consumption of the branch feeding it.

    Raises:
        InfeasibleFlowError: rho above rho_max(n, m)
        ConsistencyError: the angle steps fail to close with winding number m
    """
    limit = rho_max(spec.n, spec.m)
    context = f"ring n={spec.n} m={spec.m}"
    if spec.rho > limit + tol:
        raise InfeasibleFlowError(
            f"R/X ratio {spec.rho!r} exceeds the ring limit {limit:.6f}", context=context
        )

    theta = spec.branch_angle
    point = solve_branch_at_angle(spec.impedance, theta, tol)
    steps = [theta] * spec.n

    winding = winding_sum(steps, max_step=MAX_BRANCH_ANGLE)
    if not winding.consistent or winding.m != spec.m:
        raise ConsistencyError(
            f"{context}: angle steps sum to {winding.total!r}, winding {winding.m}"
        )

    q_consumption = point.sigma * point.p_recv
    losses = point.losses
    return RingSolution(
        spec=spec,
        operating_point=point,
        p_circ=point.p_recv,
        mu=point.mu,
        sigma=point.sigma,
        per_branch_q_consumption=q_consumption,
        per_branch_losses=losses,
        per_bus_p_injection=losses,
        per_bus_q_injection=q_consumption,
        angle_steps=steps,
        winding_check=winding.m,
    )


def ring_limit_row(n: int, m: int = TABLE_DEFAULTS['m'],
                   x: float = TABLE_DEFAULTS['x']) -> Dict[str, float]:
    """
    Limiting circulating flow of an n-branch ring at its largest feasible R/X

    Returns:
        {'n', 'm', 'rho_max', 'p_circ_at_max', 'q_per_branch', 'losses_per_branch'};
        with x = 1 the powers are in units of V_nom^2 / X_branch
    """
    limit = rho_max(n, m)
    solution = assemble_homogeneous_ring(RingSpec(n=n, m=m, x=x, rho=limit))
    return {
        'n': n,
        'm': m,
        'rho_max': limit,
        'p_circ_at_max': solution.p_circ,
        'q_per_branch': solution.per_branch_q_consumption,
        'losses_per_branch': solution.per_branch_losses,
    }


def limit_table(n_min: int = TABLE_DEFAULTS['n_min'], n_max: int = TABLE_DEFAULTS['n_max'],
                m: int = TABLE_DEFAULTS['m'], x: float = TABLE_DEFAULTS['x']) -> pd.DataFrame:
    """Ring limit rows for n_min..n_max"""
    if n_max < n_min:
        raise DomainError(f"empty ring size range [{n_min}, {n_max}]")
    return pd.DataFrame([ring_limit_row(n, m, x) for n in range(n_min, n_max + 1)])


def circulating_power_continuum(x: float, n: int, m: int,
                                points: int = SWEEP_DEFAULTS['steps'] + 1) -> pd.DataFrame:
    """
    Feasible circulating flows from ρ = 0 up to ρ_max(n, m)

    Returns:
        DataFrame with columns rho, p_circ, sigma, losses, counter_flow_q
    """
    if points < 2:
        raise DomainError(f"a continuum needs at least 2 points, got {points}")
    rows = []
    for rho in np.linspace(0.0, rho_max(n, m), points):
        solution = assemble_homogeneous_ring(RingSpec(n=n, m=m, x=x, rho=float(rho)))
        rows.append({
            'rho': float(rho),
            'p_circ': solution.p_circ,
            'sigma': solution.sigma,
            'losses': solution.per_branch_losses,
            'counter_flow_q': solution.counter_flow_q,
        })
    return pd.DataFrame(rows)


if __name__ == "__main__":
    print("Testing ring analysis...")

    print("\nRing limit table (units of V_nom^2 / X_branch):")
    print(limit_table().round(4).to_string(index=False))

    ring = assemble_homogeneous_ring(RingSpec(n=7, m=1, x=1.0, rho=0.5))
    print(f"\nn=7, m=1, rho=0.5: P_circ={ring.p_circ:.4f}, sigma={ring.sigma:.4f}, "
          f"winding={ring.winding_check}")

    net = StringNetwork(branches=[make_impedance(0.0, 0.1)] * 2, injections=[0.0], tail_power=1.0)
    print("\nTwo-branch string:")
    print(solve_string(net).to_frame().to_string(index=False))
