"""
Numeric helpers shared by the branch solver, the oracle and the CLI
- Cancellation-free quadratic roots
- Bracketed bisection
- Central finite differences
- Round-half-even decimal formatting
"""

import logging
import math
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from typing import Callable, Tuple

from config import BISECTION, TOLERANCES
from errors import ConsistencyError, InfeasibleFlowError

logger = logging.getLogger(__name__)


def quadratic_roots(a: float, b: float, c: float) -> Tuple[float, ...]:
    """
    Real roots of a*x^2 + b*x + c = 0 without subtractive cancellation

    Uses q = -(b + sign(b) * sqrt(D)) / 2 and returns (q / a, c / q), so the
    small-magnitude root is never formed as a difference of nearly equal values.

    Args:
        a, b, c: Real coefficients

    Returns:
        () when there are no real roots, one root for the linear or double-root
        case, otherwise two roots (large-magnitude root first when b != 0)
    """
    if a == 0.0:
        if b != 0.0:
            return (-c / b,)
        return ()

    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return ()
    if disc == 0.0:
        return (-0.5 * b / a,)

    sign_b = 1.0 if b >= 0.0 else -1.0
    q = -0.5 * (b + sign_b * math.sqrt(disc))
    if q == 0.0:
        # b == 0 and c == 0
        return (0.0, 0.0)
    return q / a, c / q


def bisect_root(func: Callable[[float], float], lo: float, hi: float,
                tol: float = BISECTION['default_tol'],
                residual_tol: float = TOLERANCES['bisection_residual'],
                max_iterations: int = BISECTION['max_iterations']) -> float:
    """
    Find a root of func on [lo, hi] by bisection

    Stops when the bracket is narrower than tol AND |func(mid)| < residual_tol.

    Args:
        func: Continuous function with a sign change on [lo, hi]
        lo, hi: Bracket end points (lo < hi)
        tol: Absolute bracket width at termination
        residual_tol: Absolute residual at termination
        max_iterations: Iteration budget

    Returns:
        Root estimate

    Raises:
        InfeasibleFlowError: No sign change on the bracket
        ConsistencyError: Budget exhausted before both stopping criteria hold
    """
    f_lo = func(lo)
    f_hi = func(hi)

    if f_hi == 0.0:
        return hi
    if f_lo == 0.0:
        return lo
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise InfeasibleFlowError(
            f"no sign change on [{lo!r}, {hi!r}] (f={f_lo:.3e}, {f_hi:.3e})"
        )

    for iteration in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)

        if f_mid == 0.0 or (hi - lo < tol and abs(f_mid) < residual_tol):
            logger.debug("bisection converged after %d iterations at %r", iteration, mid)
            return mid

        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid

    raise ConsistencyError(f"bisection did not converge in {max_iterations} iterations")


def central_difference(func: Callable[[float], float], x: float, h: float = 1e-6) -> float:
    """Central finite difference with the step scaled to the argument"""
    step = h * max(1.0, abs(x))
    return (func(x + step) - func(x - step)) / (2.0 * step)


def round_half_even(value: float, precision: int) -> str:
    """
    Format a number with exactly `precision` decimal places

    Rounds half-to-even on the shortest decimal representation of the float,
    so 0.125 -> '0.12' and 2.675 -> '2.68'. Negative zero prints as zero.
    """
    if not math.isfinite(value):
        return str(value)

    with localcontext() as ctx:
        ctx.prec = 60
        quantum = Decimal(1).scaleb(-precision)
        rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN)
        if rounded == 0:
            rounded = rounded.copy_abs()
        return f"{rounded:f}"


if __name__ == "__main__":
    print("Testing numeric helpers...")
    print(f"  Roots of x^2 - 3x + 2:      {quadratic_roots(1.0, -3.0, 2.0)}")
    print(f"  Root of x^2 - 2 on [0, 2]:  {bisect_root(lambda x: x * x - 2.0, 0.0, 2.0):.12f}")
    print(f"  d/dx sin(x) at 0:           {central_difference(math.sin, 0.0):.9f}")
    print(f"  0.125 to 2 places:          {round_half_even(0.125, 2)}")
