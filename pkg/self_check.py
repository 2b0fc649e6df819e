"""
Self-check of the flat-voltage solver against its own identities
Runs the closed forms against the bisection oracle, the limiting-flow
identities, the inverse relation, finite differences, the series order,
the ring limit table and the winding certificate.
"""

import itertools
import logging
import math
import time as timer
from dataclasses import asdict, dataclass
from typing import Callable, List

import numpy as np
import pandas as pd

from branch_core import (
    discriminant,
    dp_dmu,
    dq_drho,
    dsigma_dp,
    dsigma_drho,
    dsigma_dx,
    flow_coefficient,
    limiting_point,
    make_impedance,
    power_from_flow_coefficient,
    receiving_q_exact,
    receiving_q_series,
    solve_branch,
    support_coefficient,
    support_coefficient_series,
)
from config import TOLERANCES, VERIFY_GRID
from flatness_oracle import bisect_receiving_q, residual_grid
from numerics import central_difference
from ring_analysis import (
    MAX_BRANCH_ANGLE,
    RingSpec,
    assemble_homogeneous_ring,
    circulating_power,
    homogeneous_mu,
    limit_table,
    rho_max,
)

logger = logging.getLogger(__name__)

# Ring limits at rho_max, four decimals, n = 4..10 (units of V_nom^2 / X_branch)
REFERENCE_LIMIT_TABLE = {
    4: (0.0, 1.0, 2.0, 0.0),
    5: (0.3249, 0.6572, 1.25, 0.4061),
    6: (0.5774, 0.4330, 0.75, 0.4330),
    7: (0.7975, 0.2944, 0.4603, 0.3671),
    8: (1.0, 0.2071, 0.2929, 0.2929),
    9: (1.1918, 0.1504, 0.1933, 0.2304),
    # losses cell is rho * sigma * P at full precision, not the product of rounded cells
    10: (1.3764, 0.1123, 0.1320, 0.1816),
}

THRESHOLDS = {
    'oracle_agreement': 1e-9,
    'flat_residual': 1e-10,
    'limiting_identities': 1e-10,
    'inverse_round_trip': 1e-10,
    'derivative_consistency': 1e-5,
    'series_order': 0.0,          # pass/fail on the contraction band below
    'limit_table': 5e-5,
    'winding_certificate': 1e-9,
    'counter_flow_sign': 1e-12,
}

SERIES_CONTRACTION_BAND = (6.0, 10.0)


@dataclass
class CheckResult:
    name: str
    status: str
    worst_error: float
    threshold: float
    detail: str


def _result(name: str, worst: float, detail: str, passed: bool = None) -> CheckResult:
    threshold = THRESHOLDS[name]
    if passed is None:
        passed = worst < threshold
    return CheckResult(name, 'pass' if passed else 'fail', worst, threshold, detail)


def _grid_points():
    """(rho, XP) pairs of the verification grid, including 0.9 of each limit"""
    x = VERIFY_GRID['x']
    for rho in VERIFY_GRID['rho']:
        imp = make_impedance(rho * x, x)
        xp_limit = x * limiting_point(imp).p_max
        for xp in list(VERIFY_GRID['xp']) + [VERIFY_GRID['limit_fraction'] * xp_limit]:
            if xp < xp_limit:
                yield imp, xp / x


def _random_impedance(rng: np.random.Generator):
    rho = float(rng.uniform(0.0, 3.0))
    x = float(rng.uniform(0.01, 1.0))
    return make_impedance(rho * x, x)


def check_oracle_agreement(rng: np.random.Generator) -> CheckResult:
    worst, count = 0.0, 0
    for imp, p in _grid_points():
        worst = max(worst, abs(receiving_q_exact(imp, p) - bisect_receiving_q(imp, p)))
        count += 1
    return _result('oracle_agreement', worst, f"{count} grid points")


def check_flat_residual(rng: np.random.Generator) -> CheckResult:
    worst, count = 0.0, 0
    for imp, group in itertools.groupby(_grid_points(), key=lambda point: point[0]):
        powers = [p for _, p in group]
        flows = [receiving_q_exact(imp, p) for p in powers]
        # each closed-form Q sits on the diagonal of its impedance's P x Q grid
        residuals = np.diagonal(residual_grid(imp, powers, flows))
        worst = max(worst, float(np.max(np.abs(residuals))))
        count += len(powers)
    return _result('flat_residual', worst, f"{count} grid points")


def check_limiting_identities(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    n = VERIFY_GRID['random_points']
    for _ in range(n):
        imp = _random_impedance(rng)
        limit = limiting_point(imp)
        root_k = math.sqrt(1.0 + imp.rho ** 2)
        errors = (
            limit.sigma_at_limit - 2.0 / root_k,
            limit.mu_at_limit - 1.0 / root_k,
            limit.impedance_angle - math.asin(imp.x / imp.magnitude),
            discriminant(imp, limit.p_max),
        )
        worst = max(worst, max(abs(e) for e in errors))
    return _result('limiting_identities', worst, f"{n} random impedances")


def check_inverse_round_trip(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    n = 10 * VERIFY_GRID['random_points']
    for _ in range(n):
        imp = _random_impedance(rng)
        limit = limiting_point(imp)

        p = float(rng.uniform(0.01, 0.99)) * limit.p_max
        p_back = power_from_flow_coefficient(imp, flow_coefficient(imp, p))
        worst = max(worst, abs(p_back - p) / p)

        mu = float(rng.uniform(0.01, 0.99)) * limit.mu_at_limit
        mu_back = flow_coefficient(imp, power_from_flow_coefficient(imp, mu))
        worst = max(worst, abs(mu_back - mu) / mu)

    # n = 7 ring: mu and both ends of the circulating-power continuum
    endpoints = (
        (homogeneous_mu(7, 1), 0.7818),
        (circulating_power(1.0, 0.0, 7, 1), 0.7818),
        (circulating_power(1.0, rho_max(7, 1), 7, 1), 0.2944),
    )
    ring_ok = all(round(value, 4) == expected for value, expected in endpoints)
    passed = worst < THRESHOLDS['inverse_round_trip'] and ring_ok
    return _result('inverse_round_trip', worst,
                   f"{2 * n} round trips; n=7 ring endpoints {'ok' if ring_ok else 'mismatch'}",
                   passed)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def check_derivative_consistency(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    n = VERIFY_GRID['random_points']
    for _ in range(n):
        rho = float(rng.uniform(0.1, 2.0))
        x = float(rng.uniform(0.05, 1.0))
        imp = make_impedance(rho * x, x)
        limit = limiting_point(imp)
        p = float(rng.uniform(0.05, 0.8)) * limit.p_max
        mu = float(rng.uniform(0.05, 0.8)) * limit.mu_at_limit

        pairs = (
            (dsigma_dp(imp, p),
             central_difference(lambda pp: support_coefficient(imp, pp), p)),
            (dsigma_drho(imp, p),
             central_difference(lambda rr: support_coefficient(make_impedance(rr * x, x), p), rho)),
            (dsigma_dx(imp, p),
             central_difference(lambda xx: support_coefficient(make_impedance(rho * xx, xx), p), x)),
            (dq_drho(imp, p),
             central_difference(lambda rr: receiving_q_exact(make_impedance(rr * x, x), p), rho)),
            (dp_dmu(imp, mu),
             central_difference(lambda mm: power_from_flow_coefficient(imp, mm), mu)),
        )
        worst = max(worst, max(_relative(exact, approx) for exact, approx in pairs))

    # small-flow limit of d sigma / d P
    for rho in VERIFY_GRID['rho']:
        imp = make_impedance(rho * VERIFY_GRID['x'], VERIFY_GRID['x'])
        tiny = 1e-8 * limiting_point(imp).p_max
        limit_error = _relative(dsigma_dp(imp, tiny), (1.0 + rho * rho) * imp.x)
        worst = max(worst, limit_error)
    return _result('derivative_consistency', worst, f"{n} random interior points, 5 derivatives")


def check_series_order(rng: np.random.Generator) -> CheckResult:
    """Normalised series error contracts by about 8 per halving of XP"""
    low, high = SERIES_CONTRACTION_BAND
    ratios = []
    for rho in (0.0, 0.5, 1.0):
        xp_values = [0.04 / 2 ** i for i in range(5)]
        q_errors, sigma_errors = [], []
        for xp in xp_values:
            imp = make_impedance(rho * xp, xp)
            q_errors.append(abs(receiving_q_series(imp, 1.0) - receiving_q_exact(imp, 1.0)))
            sigma_errors.append(abs(support_coefficient_series(imp, 1.0) - support_coefficient(imp, 1.0)))
        for errors in (q_errors, sigma_errors):
            ratios.extend(a / b for a, b in zip(errors[:-1], errors[1:]))

    passed = all(low <= r <= high for r in ratios)
    worst = max(abs(r - 8.0) for r in ratios)
    return _result('series_order', worst,
                   f"contraction ratios {min(ratios):.3f}..{max(ratios):.3f}", passed)


def check_limit_table(rng: np.random.Generator) -> CheckResult:
    table = limit_table(4, 10)
    columns = ['rho_max', 'p_circ_at_max', 'q_per_branch', 'losses_per_branch']
    worst = 0.0
    for _, row in table.iterrows():
        expected = REFERENCE_LIMIT_TABLE[int(row['n'])]
        worst = max(worst, max(abs(row[c] - e) for c, e in zip(columns, expected)))
    return _result('limit_table', worst, f"{len(table) * len(columns)} cells")


def check_winding_certificate(rng: np.random.Generator) -> CheckResult:
    worst, count = 0.0, 0
    steps_ok = True
    for n in range(4, 17):
        for m in range(1, n // 4 + 1):
            limit = rho_max(n, m)
            for rho in (0.0, 0.5 * limit, limit):
                ring = assemble_homogeneous_ring(RingSpec(n=n, m=m, x=1.0, rho=rho))
                worst = max(worst, abs(math.fsum(ring.angle_steps) - 2.0 * math.pi * m))
                steps_ok = steps_ok and max(ring.angle_steps) <= MAX_BRANCH_ANGLE + TOLERANCES['feasibility']
                count += 1
    passed = worst < THRESHOLDS['winding_certificate'] and steps_ok
    return _result('winding_certificate', worst, f"{count} rings", passed)


def check_counter_flow_sign(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    negative = True
    count = 0
    for imp, p in _grid_points():
        if imp.rho == 0.0 or p == 0.0:
            continue
        point = solve_branch(imp, p)
        negative = negative and point.counter_flow_q < 0.0
        worst = max(worst, abs((point.q_send - point.q_recv) - point.sigma * point.p_recv))
        count += 1
    passed = negative and worst < THRESHOLDS['counter_flow_sign']
    return _result('counter_flow_sign', worst, f"{count} lossy branches", passed)


CHECKS: List[Callable[[np.random.Generator], CheckResult]] = [
    check_oracle_agreement,
    check_flat_residual,
    check_limiting_identities,
    check_inverse_round_trip,
    check_derivative_consistency,
    check_series_order,
    check_limit_table,
    check_winding_certificate,
    check_counter_flow_sign,
]


def run_checks(seed: int = VERIFY_GRID['seed']) -> pd.DataFrame:
    """
    Run every self-check

    Returns:
        DataFrame with columns name, status, worst_error, threshold, detail
    """
    rng = np.random.default_rng(seed)
    results = []
    for check in CHECKS:
        result = check(rng)
        logger.debug("%s: %s (worst %.3e)", result.name, result.status, result.worst_error)
        results.append(asdict(result))
    return pd.DataFrame(results, columns=['name', 'status', 'worst_error', 'threshold', 'detail'])


def main() -> int:
    """Print a step-by-step self-check report, returns 0 when every check passes"""
    start_time = timer.time()

    print("=" * 70)
    print("FLAT-VOLTAGE SOLVER SELF-CHECK")
    print("=" * 70)

    rng = np.random.default_rng(VERIFY_GRID['seed'])
    failures = []
    for i, check in enumerate(CHECKS, start=1):
        result = check(rng)
        marker = "✓" if result.status == 'pass' else "✗"
        print(f"\n[{i}/{len(CHECKS)}] {result.name}")
        print(f"{marker} worst error {result.worst_error:.3e} (threshold {result.threshold:g}) - {result.detail}")
        if result.status != 'pass':
            failures.append(result.name)

    print("\n" + "=" * 70)
    if failures:
        print(f"✗ {len(failures)} check(s) failed: {', '.join(failures)}")
    else:
        print("✓ All checks passed")
    print(f"Total runtime: {timer.time() - start_time:.1f} seconds")
    print("=" * 70)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
