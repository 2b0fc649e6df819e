"""
Flatness Oracle
Independent first-principles checks for the closed-form branch solver.
Rebuilds complex phasors from (P_k, Q_k) with Ohm's law and finds the
practical Q_k by bisection, without touching the closed-form root.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from branch_core import BranchImpedance
from config import BISECTION, TOLERANCES
from errors import DomainError, InfeasibleFlowError
from numerics import bisect_root, quadratic_roots

logger = logging.getLogger(__name__)

RECEIVING_REFERENCE = complex(1.0, 0.0)


@dataclass(frozen=True)
class PhasorState:
    """Complex voltages, current and powers of one branch, bus k as the 1∠0 reference"""
    v_recv: complex
    v_send: complex
    current: complex
    s_send: complex
    s_recv: complex

    @property
    def voltage_product(self) -> complex:
        """V_j · conj(V_k)"""
        return self.v_send * self.v_recv.conjugate()

    @property
    def phase_shift(self) -> float:
        """δ_j − δ_k"""
        return cmath.phase(self.voltage_product)

    @property
    def flow_coefficient(self) -> float:
        """Im(V_j V_k*) = X P_k − R Q_k, whether or not the profile is flat"""
        return self.voltage_product.imag

    @property
    def send_magnitude(self) -> float:
        return abs(self.v_send)


def _check_finite(**values: float):
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


def reconstruct_phasors(imp: BranchImpedance, p_recv: float, q_recv: float) -> PhasorState:
    """
    Rebuild the branch phasors from the receiving-end power

    With V_k = 1∠0, I = conj(S_k / V_k) = P_k − jQ_k and V_j = V_k + Z·I.

    Args:
        imp: Branch impedance
        p_recv: Receiving-end active power (per-unit)
        q_recv: Receiving-end reactive power (per-unit)

    Returns:
        PhasorState
    """
    _check_finite(p_recv=p_recv, q_recv=q_recv)
    z = complex(imp.r, imp.x)
    s_recv = complex(p_recv, q_recv)
    current = (s_recv / RECEIVING_REFERENCE).conjugate()
    v_send = RECEIVING_REFERENCE + z * current
    return PhasorState(
        v_recv=RECEIVING_REFERENCE,
        v_send=v_send,
        current=current,
        s_send=v_send * current.conjugate(),
        s_recv=s_recv,
    )


def flat_residual(imp: BranchImpedance, p_recv: float, q_recv: float) -> float:
    """
    |V_j|^2 − 1 for the given receiving-end power

    Expanded as 2(RP + XQ) + |Z|^2 (P^2 + Q^2) rather than taken from the
    phasor, so the residual at a root is not swamped by the 1.
    """
    _check_finite(p_recv=p_recv, q_recv=q_recv)
    return (2.0 * (imp.r * p_recv + imp.x * q_recv)
            + imp.z_squared * (p_recv * p_recv + q_recv * q_recv))


def bisect_receiving_q(imp: BranchImpedance, p_recv: float,
                       tol: float = BISECTION['default_tol']) -> float:
    """
    Practical Q_k by bisection on the flat residual

    The bracket [−X/|Z|^2, 0] runs from the vertex of the residual (midpoint
    of both roots) to zero, so only the practical root can be found.

    Raises:
        DomainError: p_recv negative or not finite
        InfeasibleFlowError: no sign change on the bracket (beyond the limit)
    """
    _check_finite(p_recv=p_recv)
    if p_recv < 0.0:
        raise DomainError(f"receiving-end power must be non-negative, got {p_recv!r}")
    if p_recv == 0.0:
        return 0.0

    vertex = -imp.x / imp.z_squared
    try:
        root = bisect_root(
            lambda q: flat_residual(imp, p_recv, q),
            vertex, 0.0,
            tol=tol,
            residual_tol=TOLERANCES['bisection_residual'],
        )
    except InfeasibleFlowError as exc:
        raise InfeasibleFlowError(
            f"no flat-voltage Q_k for p_recv={p_recv!r} ({exc})",
            context=f"branch r={imp.r!r} x={imp.x!r}",
        ) from exc
    return root


def _biquadratic_magnitudes(known_mag: float, linear: float, product: float) -> Tuple[float, float]:
    """Non-negative roots u = |V| of u^4 − (known^2 + linear) u^2 + product = 0, descending"""
    if not math.isfinite(known_mag) or known_mag <= 0.0:
        raise DomainError(f"known voltage magnitude must be positive, got {known_mag!r}")

    squares = quadratic_roots(1.0, -(known_mag * known_mag + linear), product)
    # a tiny negative square is a zero root that rounding pushed below zero
    magnitudes = [math.sqrt(max(u, 0.0)) for u in squares if u >= -TOLERANCES['feasibility']]
    if not magnitudes:
        raise InfeasibleFlowError(
            f"voltage biquadratic has no real non-negative root "
            f"(|V|={known_mag!r}, linear={linear!r}, product={product!r})"
        )
    if len(magnitudes) == 1:
        magnitudes.append(magnitudes[0])
    high, low = sorted(magnitudes, reverse=True)
    return high, low


def receiving_voltage_magnitude(v_send_mag: float, imp: BranchImpedance,
                                p_recv: float, q_recv: float) -> Tuple[float, float]:
    """
    Both receiving-end magnitudes |V_k| for a given |V_j| and receiving power

    Solves |V_k|^4 − [|V_j|^2 − 2(RP_k + XQ_k)] |V_k|^2 + |Z|^2 (P_k^2 + Q_k^2) = 0.

    Returns:
        (high root, low root). On a flat solution the roots are 1 and |Z·I|,
        so 1 is the high root while the branch voltage drop stays below 1.
    """
    _check_finite(p_recv=p_recv, q_recv=q_recv)
    return _biquadratic_magnitudes(
        v_send_mag,
        -2.0 * (imp.r * p_recv + imp.x * q_recv),
        imp.z_squared * (p_recv * p_recv + q_recv * q_recv),
    )


def sending_voltage_magnitude(v_recv_mag: float, imp: BranchImpedance,
                              p_send: float, q_send: float) -> Tuple[float, float]:
    """
    Both sending-end magnitudes |V_j| for a given |V_k| and sending power

    Solves |V_j|^4 − [|V_k|^2 + 2(RP_j + XQ_j)] |V_j|^2 + |Z|^2 (P_j^2 + Q_j^2) = 0.
    """
    _check_finite(p_send=p_send, q_send=q_send)
    return _biquadratic_magnitudes(
        v_recv_mag,
        2.0 * (imp.r * p_send + imp.x * q_send),
        imp.z_squared * (p_send * p_send + q_send * q_send),
    )


def residual_grid(imp: BranchImpedance, p_values, q_values) -> np.ndarray:
    """Flat residual over a P × Q grid (rows follow p_values)"""
    p = np.asarray(p_values, dtype=float)[:, np.newaxis]
    q = np.asarray(q_values, dtype=float)[np.newaxis, :]
    return 2.0 * (imp.r * p + imp.x * q) + imp.z_squared * (p * p + q * q)


if __name__ == "__main__":
    from branch_core import make_impedance, receiving_q_exact

    print("Testing flatness oracle...")
    imp = make_impedance(0.05, 0.1)

    q_exact = receiving_q_exact(imp, 1.0)
    q_bisect = bisect_receiving_q(imp, 1.0)
    state = reconstruct_phasors(imp, 1.0, q_exact)

    print(f"  Closed-form Q_k:  {q_exact:.12f}")
    print(f"  Bisection Q_k:    {q_bisect:.12f}")
    print(f"  |V_j|:            {state.send_magnitude:.12f}")
    print(f"  phase shift:      {state.phase_shift:.6f} rad")
    print(f"  residual:         {flat_residual(imp, 1.0, q_exact):.3e}")
    marker = "✓" if abs(q_exact - q_bisect) < 1e-9 else "✗"
    print(f"\n{marker} closed form and bisection agree to {abs(q_exact - q_bisect):.2e}")
