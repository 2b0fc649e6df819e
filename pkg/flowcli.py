"""
Flat-voltage power flow - batch command line
Solves branches, limits, inverses, rings, string networks, the ring limit
table and parameter sweeps, writing CSV or JSON.

Usage:
    python flowcli.py branch --r 0.05 --x 0.1 --p 1.0
    python flowcli.py table --n-max 10
    python flowcli.py sweep --var p --rho 0.5 --x 0.1 --start 0 --stop max --steps 10
    python flowcli.py verify
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

from branch_core import (
    BranchImpedance,
    limiting_point,
    linearized_angle,
    make_impedance,
    power_candidates_from_flow_coefficient,
    angle_from_flow_coefficient,
    solve_branch,
)
from config import EXIT_CODES, LOGGING_CONFIG, OUTPUT_DEFAULTS, SWEEP_DEFAULTS, TABLE_DEFAULTS, TOLERANCES
from errors import DomainError, FlowError, InfeasibleFlowError
from numerics import round_half_even
from ring_analysis import (
    PerUnitBase,
    RingSpec,
    StringNetwork,
    assemble_homogeneous_ring,
    from_per_unit,
    limit_table,
    rho_max,
    solve_string,
    to_per_unit,
)
from self_check import run_checks

logger = logging.getLogger(__name__)

COMMANDS = ('branch', 'limit', 'inverse', 'ring', 'table', 'sweep', 'string', 'verify')
SWEEP_VARIABLES = ('p', 'rho', 'x', 'n')

# Output columns by unit, used for --degrees and SI conversion
ANGLE_COLUMNS = {'phase_shift', 'dc_angle', 'impedance_angle', 'angle_step', 'angle'}
POWER_COLUMNS = {
    'p', 'p_recv', 'q_recv', 'p_send', 'q_send', 'losses', 'p_discarded',
    'p_max', 'q_at_limit', 'p_circ', 'q_per_bus', 'losses_per_bus', 'counter_flow_q',
    'p_injection', 'q_injection', 'p_out', 'q_out',
}
IMPEDANCE_COLUMNS = {'r', 'x'}
INTEGER_COLUMNS = {'n', 'm', 'winding', 'bus'}

# Parameters each command needs before any computation starts
REQUIRED_PARAMETERS = {
    'branch': ('r', 'x', 'p'),
    'limit': ('r', 'x'),
    'inverse': ('r', 'x', 'mu'),
    'ring': ('n', 'm', 'x', 'rho'),
    'table': ('n_min', 'n_max', 'm'),
    'sweep': ('var', 'start', 'stop', 'steps'),
    'string': ('x', 'injections', 'tail_power'),
    'verify': (),
}


class UsageError(FlowError):
    """Invalid command-line arguments or configuration"""


@dataclass
class RunConfig:
    """
    One CLI invocation, complete enough to be replayed from its JSON output

    Attributes:
        command: One of COMMANDS
        parameters: Command-specific numeric arguments
        output_format: csv or json
        precision: Decimal places; None uses the command default
        degrees: Report angles in degrees instead of radians
        v_nom: Nominal voltage (V) for SI input/output, with s_base
        s_base: Power base (VA) for SI input/output, with v_nom
        feasibility_tol: Override of the discriminant feasibility tolerance
    """
    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_format: str = OUTPUT_DEFAULTS['format']
    precision: Optional[int] = None
    degrees: bool = False
    v_nom: Optional[float] = None
    s_base: Optional[float] = None
    feasibility_tol: Optional[float] = None

    @property
    def resolved_precision(self) -> int:
        if self.precision is not None:
            return self.precision
        if self.command == 'table':
            return OUTPUT_DEFAULTS['table_precision']
        return OUTPUT_DEFAULTS['precision']

    @property
    def tol(self) -> float:
        if self.feasibility_tol is None:
            return TOLERANCES['feasibility']
        return self.feasibility_tol

    @property
    def base(self) -> Optional[PerUnitBase]:
        if self.v_nom is None:
            return None
        return PerUnitBase(self.v_nom, self.s_base)

    def validate(self):
        """Raise UsageError for anything that would fail before computing"""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ('csv', 'json'):
            raise UsageError(f"output format must be csv or json, got {self.output_format!r}")

        low, high = OUTPUT_DEFAULTS['min_precision'], OUTPUT_DEFAULTS['max_precision']
        if self.precision is not None and not low <= self.precision <= high:
            raise UsageError(f"precision must lie in [{low}, {high}], got {self.precision}")

        if (self.v_nom is None) != (self.s_base is None):
            raise UsageError("--v-nom and --s-base must be given together")
        if self.v_nom is not None:
            if self.command == 'table':
                raise UsageError("table values are normalised to 1/X and take no SI base")
            if not (_is_finite(self.v_nom) and _is_finite(self.s_base)) or self.v_nom <= 0 or self.s_base <= 0:
                raise UsageError("--v-nom and --s-base must be positive")

        if self.feasibility_tol is not None:
            if not _is_finite(self.feasibility_tol) or self.feasibility_tol <= 0:
                raise UsageError(f"feasibility tolerance must be positive, got {self.feasibility_tol!r}")

        missing = [name for name in REQUIRED_PARAMETERS[self.command] if self.parameters.get(name) is None]
        if missing:
            raise UsageError(f"{self.command} needs {', '.join('--' + m.replace('_', '-') for m in missing)}")

        for name, value in self.parameters.items():
            values = value if isinstance(value, list) else [value]
            for v in values:
                if isinstance(v, float) and not math.isfinite(v):
                    raise UsageError(f"--{name.replace('_', '-')} must be finite, got {v!r}")

        if self.command == 'sweep':
            self._validate_sweep()

    def _validate_sweep(self):
        params = self.parameters
        if params['var'] not in SWEEP_VARIABLES:
            raise UsageError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {params['var']!r}")
        if params['steps'] < 1:
            raise UsageError(f"sweep needs at least one step, got {params['steps']}")

        var = params['var']
        ring_mode = var == 'n' or params.get('n') is not None
        if var != 'x' and params.get('x') is None:
            raise UsageError(f"a {var} sweep needs --x")
        if var == 'p' and ring_mode:
            raise UsageError("a p sweep solves a single branch and takes no --n")
        if var in ('x', 'rho') and not ring_mode and params.get('p') is None:
            raise UsageError(f"a {var} sweep needs --p (branch) or --n (ring)")

        stop = params['stop']
        if stop == 'max':
            if params['var'] not in ('p', 'rho') or (params['var'] == 'rho' and params.get('n') is None):
                raise UsageError("--stop max applies to p sweeps and ring rho sweeps only")
        elif stop < params['start']:
            raise UsageError(f"inverted sweep range [{params['start']}, {stop}]")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        try:
            return cls(**data)
        except TypeError as exc:
            raise UsageError(f"malformed run configuration: {exc}") from exc


def _is_finite(value) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)


# =============================================================================
# UNIT HANDLING
# =============================================================================

def _impedance(config: RunConfig, r: float, x: float) -> BranchImpedance:
    base = config.base
    if base is not None:
        r, x = to_per_unit(r, base, 'impedance'), to_per_unit(x, base, 'impedance')
    return make_impedance(r, x)


def _power_in(config: RunConfig, p: float) -> float:
    base = config.base
    return p if base is None else to_per_unit(p, base, 'power')


def _reactance_in(config: RunConfig, x: float) -> float:
    base = config.base
    return x if base is None else to_per_unit(x, base, 'impedance')


def _convert_units(frame: pd.DataFrame, config: RunConfig) -> pd.DataFrame:
    """Per-unit / radian frame to the units requested on the command line"""
    frame = frame.copy()
    base = config.base
    for column in frame.columns:
        if config.degrees and column in ANGLE_COLUMNS:
            frame[column] = frame[column].map(lambda v: v if _missing(v) else math.degrees(v))
        if base is not None and column in POWER_COLUMNS:
            frame[column] = frame[column].map(lambda v: v if _missing(v) else from_per_unit(v, base, 'power'))
        if base is not None and column in IMPEDANCE_COLUMNS:
            frame[column] = frame[column].map(lambda v: v if _missing(v) else from_per_unit(v, base, 'impedance'))
    return frame


def _missing(value) -> bool:
    return value is None or value is pd.NA or (isinstance(value, (float, np.floating)) and math.isnan(value))


# =============================================================================
# COMMANDS
# =============================================================================

def _branch_row(imp: BranchImpedance, p: float, tol: float) -> Dict[str, Any]:
    point = solve_branch(imp, p, tol)
    return {
        'r': imp.r,
        'x': imp.x,
        'rho': imp.rho,
        'p_recv': point.p_recv,
        'q_recv': point.q_recv,
        'p_send': point.p_send,
        'q_send': point.q_send,
        'current_mag': point.current_mag,
        'sigma': point.sigma,
        'mu': point.mu,
        'phase_shift': point.phase_shift,
        'dc_angle': linearized_angle(imp, point.p_recv),
        'losses': point.losses,
    }


def _ring_row(spec: RingSpec, tol: float) -> Dict[str, Any]:
    ring = assemble_homogeneous_ring(spec, tol)
    return {
        'n': spec.n,
        'm': spec.m,
        'x': spec.x,
        'rho': spec.rho,
        'rho_max': rho_max(spec.n, spec.m),
        'p_circ': ring.p_circ,
        'mu': ring.mu,
        'sigma': ring.sigma,
        'q_per_bus': ring.per_bus_q_injection,
        'losses_per_bus': ring.per_bus_p_injection,
        'counter_flow_q': ring.counter_flow_q,
        'angle_step': ring.angle_steps[0],
        'winding': ring.winding_check,
    }


def command_branch(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    imp = _impedance(config, params['r'], params['x'])
    powers = params['p'] if isinstance(params['p'], list) else [params['p']]
    return pd.DataFrame([_branch_row(imp, _power_in(config, p), config.tol) for p in powers])


def command_limit(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    imp = _impedance(config, params['r'], params['x'])
    limit = limiting_point(imp)
    return pd.DataFrame([{
        'r': imp.r,
        'x': imp.x,
        'rho': imp.rho,
        'p_max': limit.p_max,
        'q_at_limit': limit.q_at_limit,
        'sigma_at_limit': limit.sigma_at_limit,
        'mu_at_limit': limit.mu_at_limit,
        'impedance_angle': limit.impedance_angle,
    }])


def command_inverse(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    imp = _impedance(config, params['r'], params['x'])
    kept, discarded = power_candidates_from_flow_coefficient(imp, params['mu'], config.tol)
    return pd.DataFrame([{
        'r': imp.r,
        'x': imp.x,
        'mu': params['mu'],
        'p_recv': kept,
        'p_discarded': discarded,
        'phase_shift': angle_from_flow_coefficient(params['mu']),
    }])


def command_ring(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    spec = RingSpec(n=params['n'], m=params['m'], x=_reactance_in(config, params['x']), rho=params['rho'])
    return pd.DataFrame([_ring_row(spec, config.tol)])


def command_table(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    return limit_table(params['n_min'], params['n_max'], params['m'])


def command_string(config: RunConfig) -> pd.DataFrame:
    params = config.parameters
    reactances = params['x']
    resistances = params['r'] or [0.0] * len(reactances)
    if len(resistances) != len(reactances):
        raise UsageError(f"{len(reactances)} reactances but {len(resistances)} resistances")
    net = StringNetwork(
        branches=[_impedance(config, r, x) for r, x in zip(resistances, reactances)],
        injections=[_power_in(config, p) for p in params['injections']],
        tail_power=_power_in(config, params['tail_power']),
    )
    return solve_string(net, config.tol).to_frame()


def _sweep_stop(config: RunConfig) -> float:
    params = config.parameters
    if params['stop'] != 'max':
        return params['stop']
    if params['var'] == 'p':
        imp = _impedance(config, params['rho'] * params['x'], params['x'])
        p_max = limiting_point(imp).p_max
        base = config.base
        return p_max if base is None else from_per_unit(p_max, base, 'power')
    return rho_max(params['n'], params.get('m') or TABLE_DEFAULTS['m'])


def _sweep_grid(config: RunConfig) -> List:
    params = config.parameters
    start, stop = params['start'], _sweep_stop(config)
    if params['var'] == 'n':
        return list(range(int(start), int(stop) + 1))
    return [float(v) for v in np.linspace(start, stop, params['steps'] + 1)]


def _sweep_point(config: RunConfig, value) -> Dict[str, Any]:
    params = dict(config.parameters)
    params[params['var']] = value
    ring_mode = params['var'] == 'n' or params.get('n') is not None

    if ring_mode:
        spec = RingSpec(n=params['n'], m=params.get('m') or TABLE_DEFAULTS['m'],
                        x=_reactance_in(config, params['x']), rho=params['rho'])
        return _ring_row(spec, config.tol)

    imp = _impedance(config, params['rho'] * params['x'], params['x'])
    return _branch_row(imp, _power_in(config, params['p']), config.tol)


def _sweep_value_per_unit(config: RunConfig, value):
    var = config.parameters['var']
    if var == 'p':
        return _power_in(config, value)
    if var == 'x':
        return _reactance_in(config, value)
    return value


def _sweep_context(config: RunConfig, value) -> Dict[str, Any]:
    """Input columns of a grid point, for rows whose point could not be solved"""
    params = dict(config.parameters)
    params[params['var']] = value
    x = _reactance_in(config, params['x'])
    if params['var'] == 'n' or params.get('n') is not None:
        context = {'n': params['n'], 'm': params.get('m') or TABLE_DEFAULTS['m'], 'x': x, 'rho': params['rho']}
    else:
        context = {'r': params['rho'] * x, 'x': x, 'rho': params['rho']}
    context.pop(params['var'], None)
    return context


def command_sweep(config: RunConfig) -> pd.DataFrame:
    """One row per grid point; failed points keep their row with a status and their inputs"""
    var = config.parameters['var']
    rows = []
    for value in _sweep_grid(config):
        try:
            row = {'status': 'ok', **_sweep_point(config, value)}
        except InfeasibleFlowError as exc:
            logger.debug("sweep %s=%r infeasible: %s", var, value, exc)
            row = {'status': 'infeasible', **_sweep_context(config, value)}
        except DomainError as exc:
            logger.debug("sweep %s=%r invalid: %s", var, value, exc)
            row = {'status': 'invalid', **_sweep_context(config, value)}
        rows.append({var: _sweep_value_per_unit(config, value), **row})

    frame = pd.DataFrame(rows)
    for column in INTEGER_COLUMNS.intersection(frame.columns):
        frame[column] = frame[column].astype('Int64')
    # swept value first; failed rows keep it
    return frame[[var] + [c for c in frame.columns if c != var]]


def command_verify(config: RunConfig) -> pd.DataFrame:
    frame = run_checks()
    for column in ('worst_error', 'threshold'):
        frame[column] = frame[column].map(lambda v: f"{v:.3e}")
    return frame


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig], pd.DataFrame]] = {
    'branch': command_branch,
    'limit': command_limit,
    'inverse': command_inverse,
    'ring': command_ring,
    'table': command_table,
    'sweep': command_sweep,
    'string': command_string,
    'verify': command_verify,
}


# =============================================================================
# OUTPUT
# =============================================================================

def _format_value(value, precision: int):
    if _missing(value):
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return round_half_even(float(value), precision)
    return str(value)


def format_frame(frame: pd.DataFrame, precision: int) -> pd.DataFrame:
    """Every cell as its output string, numbers rounded half-to-even"""
    def format_column(column: pd.Series) -> pd.Series:
        # nullable integer columns would hand map() floats
        if pd.api.types.is_integer_dtype(column):
            column = column.astype(object)
        return column.map(lambda v: _format_value(v, precision))

    return frame.apply(format_column).astype(str)


def _json_value(text: str, original):
    if text == '':
        return None
    if isinstance(original, (int, np.integer)) and not isinstance(original, (bool, np.bool_)):
        return int(original)
    if isinstance(original, (float, np.floating)):
        return float(text)
    return text


def write_output(frame: pd.DataFrame, config: RunConfig, sink: TextIO):
    """Write the frame to the sink as CSV (header always present) or a JSON document"""
    frame = _convert_units(frame, config)
    formatted = format_frame(frame, config.resolved_precision)

    if config.output_format == 'csv':
        formatted.to_csv(sink, index=False, lineterminator='\n')
        return

    rows = [
        [_json_value(formatted[c].iloc[i], frame[c].iloc[i]) for c in frame.columns]
        for i in range(len(frame))
    ]
    document = {
        'config': config.to_dict(),
        'columns': list(frame.columns),
        'rows': rows,
    }
    sink.write(json.dumps(document, indent=2, ensure_ascii=False))
    sink.write('\n')


def run(config: RunConfig, sink: TextIO) -> int:
    """
    Execute one configured command and write its output

    Returns:
        Exit status: success, or check_failed when verify finds a failing check

    Raises:
        UsageError, DomainError, InfeasibleFlowError, OSError
    """
    config.validate()
    logger.debug("running %s with %s", config.command, config.parameters)
    frame = COMMAND_HANDLERS[config.command](config)
    write_output(frame, config, sink)

    if config.command == 'verify' and (frame['status'] != 'pass').any():
        return EXIT_CODES['check_failed']
    return EXIT_CODES['success']


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', dest='output_format', choices=['csv', 'json'],
                        default=OUTPUT_DEFAULTS['format'], help='output encoding')
    common.add_argument('--precision', type=int, default=None,
                        help='decimal places (default 6, table 4)')
    common.add_argument('--degrees', action='store_true', help='report angles in degrees')
    common.add_argument('--v-nom', type=float, default=None, help='nominal voltage in V (SI mode)')
    common.add_argument('--s-base', type=float, default=None, help='power base in VA (SI mode)')
    common.add_argument('--feasibility-tol', type=float, default=None,
                        help='discriminant feasibility tolerance')
    common.add_argument('--output', default=None, help='write to this file instead of stdout')
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='flowcli',
        description='Exact AC power flow under a flat voltage profile',
    )
    common = _common_options()
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('branch', parents=[common], help='solve one branch at given receiving power')
    p.add_argument('--r', type=float, required=True)
    p.add_argument('--x', type=float, required=True)
    p.add_argument('--p', type=float, nargs='+', required=True)

    p = sub.add_parser('limit', parents=[common], help='limiting flat-voltage flow of a branch')
    p.add_argument('--r', type=float, required=True)
    p.add_argument('--x', type=float, required=True)

    p = sub.add_parser('inverse', parents=[common], help='receiving power for a flow coefficient')
    p.add_argument('--r', type=float, required=True)
    p.add_argument('--x', type=float, required=True)
    p.add_argument('--mu', type=float, required=True)

    p = sub.add_parser('ring', parents=[common], help='homogeneous ring circulating flow')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--m', type=int, default=TABLE_DEFAULTS['m'])
    p.add_argument('--x', type=float, required=True)
    p.add_argument('--rho', type=float, default=0.0)

    p = sub.add_parser('table', parents=[common], help='ring limit table')
    p.add_argument('--n-min', type=int, default=TABLE_DEFAULTS['n_min'])
    p.add_argument('--n-max', type=int, default=TABLE_DEFAULTS['n_max'])
    p.add_argument('--m', type=int, default=TABLE_DEFAULTS['m'])

    p = sub.add_parser('sweep', parents=[common], help='parameter sweep')
    p.add_argument('--var', choices=SWEEP_VARIABLES, required=True)
    p.add_argument('--start', type=float, required=True)
    p.add_argument('--stop', type=_stop_value, required=True, help="end value or 'max'")
    p.add_argument('--steps', type=int, default=SWEEP_DEFAULTS['steps'])
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--x', type=float, default=None)
    p.add_argument('--rho', type=float, default=0.0)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--m', type=int, default=None)

    p = sub.add_parser('string', parents=[common], help='string network from tail power')
    p.add_argument('--x', type=float, nargs='+', required=True, help='branch reactances, head first')
    p.add_argument('--r', type=float, nargs='+', default=None, help='branch resistances (default 0)')
    p.add_argument('--injections', type=float, nargs='*', default=[],
                   help='active power injected at each intermediate bus')
    p.add_argument('--tail-power', type=float, required=True)

    sub.add_parser('verify', parents=[common], help='run the built-in self-checks')

    p = sub.add_parser('replay', help='re-run the configuration embedded in a JSON output')
    p.add_argument('path')
    p.add_argument('--output', default=None)
    p.add_argument('--verbose', action='store_true')
    return parser


def _stop_value(text: str):
    if text == 'max':
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'max', got {text!r}")


GLOBAL_OPTIONS = {'command', 'output_format', 'precision', 'degrees', 'v_nom', 's_base',
                  'feasibility_tol', 'output', 'verbose', 'path'}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    parameters = {k: v for k, v in vars(args).items() if k not in GLOBAL_OPTIONS}
    return RunConfig(
        command=args.command,
        parameters=parameters,
        output_format=args.output_format,
        precision=args.precision,
        degrees=args.degrees,
        v_nom=args.v_nom,
        s_base=args.s_base,
        feasibility_tol=args.feasibility_tol,
    )


def load_replay(path: str) -> RunConfig:
    """RunConfig embedded in a JSON document written by this tool"""
    with open(path, encoding='utf-8') as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path} is not a JSON document: {exc}") from exc
    if not isinstance(document, dict) or 'config' not in document:
        raise UsageError(f"{path} carries no run configuration")
    return RunConfig.from_dict(document['config'])


def _configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else LOGGING_CONFIG['level']
    logging.basicConfig(level=level, format=LOGGING_CONFIG['format'], stream=sys.stderr)


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    """Parse arguments, run, map errors to exit codes"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CODES['usage'] if exc.code else EXIT_CODES['success']

    _configure_logging(args.verbose)

    try:
        if args.command == 'replay':
            config = load_replay(args.path)
        else:
            config = config_from_args(args)

        if args.output:
            with open(args.output, 'w', encoding='utf-8', newline='') as sink:
                return run(config, sink)
        return run(config, stdout)

    except (UsageError, DomainError) as exc:
        print(f"flowcli: error: {exc}", file=stderr)
        return EXIT_CODES['usage']
    except InfeasibleFlowError as exc:
        print(f"flowcli: error: {exc}", file=stderr)
        return EXIT_CODES['infeasible']
    except OSError as exc:
        print(f"flowcli: error: {exc}", file=stderr)
        return EXIT_CODES['io']
    except FlowError as exc:
        print(f"flowcli: error: {exc}", file=stderr)
        return EXIT_CODES['check_failed']


if __name__ == "__main__":
    sys.exit(main())
