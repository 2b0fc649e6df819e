"""
Configuration file for flat-voltage power flow analysis
Contains numeric tolerances, output defaults and CLI settings
"""

import os

# Numeric tolerances (per-unit / dimensionless)
TOLERANCES = {
    'feasibility': float(os.getenv('FLATFLOW_FEASIBILITY_TOL', '1e-12')),  # Δ in [-tol, 0) counts as 0
    'arcsin_clamp': 1e-12,        # |μ| may exceed 1 by this much before it is an error
    'winding': 1e-9,              # |sum - 2πm| accepted as an integer winding
    'bisection_residual': 1e-12,  # |V_j|² - 1 accepted at the oracle root
}

# Oracle bisection
BISECTION = {
    'max_iterations': 200,
    'default_tol': 1e-12,
}

# Output formatting
OUTPUT_DEFAULTS = {
    'format': os.getenv('FLATFLOW_OUTPUT_FORMAT', 'csv'),
    'precision': 6,
    'table_precision': 4,   # ring limit table is printed to 4 places
    'min_precision': 1,
    'max_precision': 15,
}

# Ring limit table (values in units of V_nom² / X_branch)
TABLE_DEFAULTS = {
    'n_min': 4,
    'n_max': 10,
    'm': 1,
    'x': 1.0,
}

# Parameter sweeps
SWEEP_DEFAULTS = {
    'steps': 10,
}

# Self-check grid: ρ values and XP values, plus a fraction of (XP)_max
VERIFY_GRID = {
    'rho': [0.0, 0.1, 0.5, 1.0, 2.0],
    'xp': [0.0, 0.01, 0.1, 0.5],
    'limit_fraction': 0.9,
    'x': 0.1,
    'random_points': 100,
    'seed': 20240601,
}

# Process exit codes
EXIT_CODES = {
    'success': 0,
    'check_failed': 1,
    'usage': 2,
    'infeasible': 3,
    'io': 4,
}

# Logging
LOGGING_CONFIG = {
    'level': os.getenv('FLATFLOW_LOG_LEVEL', 'WARNING'),
    'format': '%(levelname)s %(name)s: %(message)s',
}


def check_config():
    """Check loaded settings, returns a list of problems (empty when valid)"""
    problems = []

    for name, value in TOLERANCES.items():
        if not value > 0:
            problems.append(f"TOLERANCES['{name}'] must be positive, got {value}")

    if OUTPUT_DEFAULTS['format'] not in ('csv', 'json'):
        problems.append(f"OUTPUT_DEFAULTS['format'] must be csv or json, got {OUTPUT_DEFAULTS['format']!r}")

    low, high = OUTPUT_DEFAULTS['min_precision'], OUTPUT_DEFAULTS['max_precision']
    for key in ('precision', 'table_precision'):
        if not low <= OUTPUT_DEFAULTS[key] <= high:
            problems.append(f"OUTPUT_DEFAULTS['{key}'] must lie in [{low}, {high}]")

    if TABLE_DEFAULTS['n_min'] < 4 or TABLE_DEFAULTS['n_max'] < TABLE_DEFAULTS['n_min']:
        problems.append("TABLE_DEFAULTS needs 4 <= n_min <= n_max")

    if BISECTION['max_iterations'] < 1:
        problems.append("BISECTION['max_iterations'] must be at least 1")

    return problems


if __name__ == "__main__":
    print("Configuration loaded:")
    print(f"  Feasibility tolerance: {TOLERANCES['feasibility']:g}")
    print(f"  Winding tolerance:     {TOLERANCES['winding']:g}")
    print(f"  Output format:         {OUTPUT_DEFAULTS['format']}")
    print(f"  Precision:             {OUTPUT_DEFAULTS['precision']} (table {OUTPUT_DEFAULTS['table_precision']})")
    print(f"\nExit codes:")
    for key, value in EXIT_CODES.items():
        print(f"  - {key}: {value}")

    problems = check_config()
    if problems:
        print("\n⚠️  WARNING: Configuration problems:")
        for problem in problems:
            print(f"  - {problem}")
    else:
        print("\n✓ Configuration is valid")
