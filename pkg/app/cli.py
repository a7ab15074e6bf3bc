"""Command-line front end for the monotone Kolmogorov toolkit.

Structured results go to stdout as JSON, sample grids to CSV, log output to
stderr. Exit codes: 0 ok/feasible, 1 infeasible, 2 usage or validation error,
3 numerical or I/O failure.
"""

import argparse
import json
import logging
import sys
import traceback
import uuid
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from app.tools.kolmogorov.constants import (
    DEFAULT_ATOMS, EXIT_INFEASIBLE, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE,
    FEASIBILITY_TOL, SWEEP_R_RANGE, TOL_FLOOR,
)
from app.tools.kolmogorov.errors import (
    ArgumentError, InfeasibleProblemError, InfeasibleTripleError,
    InternalCheckError, NoConvergenceError,
)
from app.tools.kolmogorov.extremal_family import build_phi_r, norm_table
from app.tools.kolmogorov.models import ExtremalParams, Problem3, Problem4
from app.tools.kolmogorov.oracle import decide, decide_three, synthesize, synthesize_three
from app.tools.kolmogorov.poly_core import PiecewisePolynomial, sample_grid
from app.tools.kolmogorov.utils.logging_utils import (
    logDebug, logSolveEnd, logSolveError, logSolveStart, setupLogging,
)
from app.tools.kolmogorov.verify import property_sweep
from config.settings import THREADS

logger = logging.getLogger(__name__)


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2))


def sample_frame(p: PiecewisePolynomial, r: int, a: float, samples: int) -> pd.DataFrame:
    """samples+1 rows of t, x, x^(1), ..., x^(r-1) over [-a-1, 0]."""
    if samples < 1:
        raise ArgumentError(f"--samples must be at least 1, got {samples}")
    ts = np.linspace(-a - 1.0, 0.0, samples + 1)
    table = sample_grid(p, r - 1, ts)
    columns = {'t': ts, 'x': table[0]}
    for k in range(1, r):
        columns[f"x^({k})"] = table[k]
    return pd.DataFrame(columns)


def _write_samples(frame: pd.DataFrame, path: Optional[str]) -> None:
    if path:
        frame.to_csv(path, index=False)
    else:
        sys.stdout.write(frame.to_csv(index=False))


def cmd_feasible(args: argparse.Namespace) -> int:
    problem = Problem4.from_values(args.r, args.k2, args.k3, args.M0, args.Mk2, args.Mk3, args.Mr)
    report = decide(problem, tol=args.tol)
    _emit(report.to_json_dict())
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def _emit_witness(witness, args: argparse.Namespace) -> int:
    _emit(witness.to_json_dict())
    if args.samples is not None:
        frame = sample_frame(witness.realized(), witness.params.r, witness.params.a, args.samples)
        _write_samples(frame, args.csv)
    return EXIT_OK


def cmd_witness(args: argparse.Namespace) -> int:
    problem = Problem4.from_values(args.r, args.k2, args.k3, args.M0, args.Mk2, args.Mk3, args.Mr)
    return _emit_witness(synthesize(problem, tol=args.tol), args)


def cmd_three(args: argparse.Namespace) -> int:
    problem = Problem3.from_values(args.r, args.k, args.M0, args.Mk, args.Mr)
    if args.samples is None:
        report = decide_three(problem, tol=args.tol)
        _emit(report.to_json_dict())
        return EXIT_OK if report.feasible else EXIT_INFEASIBLE
    return _emit_witness(synthesize_three(problem, tol=args.tol), args)


def cmd_norms(args: argparse.Namespace) -> int:
    params = ExtremalParams(args.r, args.a, args.b, args.l)
    _emit(norm_table(params).to_json_dict())
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    params = ExtremalParams(args.r, args.a, args.b, args.l)
    frame = sample_frame(build_phi_r(params), params.r, params.a, args.n)
    if args.format == 'json':
        _emit({'columns': list(frame.columns), 'rows': frame.values.tolist()})
    else:
        _write_samples(frame, args.csv)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    report = property_sweep(
        (args.r_min, args.r_max), args.trials, args.seed, atoms=args.atoms, threads=args.threads,
    )
    lines = report.to_json_lines()
    if args.report:
        with open(args.report, 'w') as f:
            f.write(lines)
        _emit({'min_slack': report.min_slack, 'failing_seeds': report.failing_seeds})
    else:
        sys.stdout.write(lines)
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


def _add_problem_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--r', type=int, required=True, help='Order r (class of (r-1)-monotone functions)')
    parser.add_argument('--k2', type=int, required=True, help='Second order, 0 < k2 < k3')
    parser.add_argument('--k3', type=int, required=True, help='Third order, k3 <= r-2')
    parser.add_argument('--M0', type=float, required=True, help='Target norm of x')
    parser.add_argument('--Mk2', type=float, required=True, help='Target norm of x^(k2)')
    parser.add_argument('--Mk3', type=float, required=True, help='Target norm of x^(k3)')
    parser.add_argument('--Mr', type=float, required=True, help='Target norm of x^(r)')


def _add_sample_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--samples', type=int, default=None,
                        help='Also write samples+1 rows over [-a-1, 0]')
    parser.add_argument('--csv', type=str, default=None, help='CSV path for samples (stdout if omitted)')


def _add_params_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--r', type=int, required=True)
    parser.add_argument('--a', type=float, required=True)
    parser.add_argument('--b', type=float, required=True)
    parser.add_argument('--l', type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='kolmogorov',
        description='Derivative norms of multiply monotone functions on the negative half-line',
    )
    parser.add_argument('--tol', type=float, default=FEASIBILITY_TOL,
                        help=f"Relative feasibility tolerance (default {FEASIBILITY_TOL:g}, floor {TOL_FLOOR:g})")
    parser.add_argument('--log-level', type=str, default=None, dest='log_level',
                        help='Console log level (default from config/parameters.json)')
    sub = parser.add_subparsers(dest='command', required=True)

    feasible = sub.add_parser('feasible', help='Decide a four-number problem')
    _add_problem_arguments(feasible)
    feasible.set_defaults(handler=cmd_feasible)

    witness = sub.add_parser('witness', help='Build a function with the four prescribed norms')
    _add_problem_arguments(witness)
    _add_sample_arguments(witness)
    witness.set_defaults(handler=cmd_witness)

    three = sub.add_parser('three', help='Decide (and with --samples, realize) a three-number problem')
    three.add_argument('--r', type=int, required=True)
    three.add_argument('--k', type=int, required=True, help='Middle order, 0 < k < r')
    three.add_argument('--M0', type=float, required=True)
    three.add_argument('--Mk', type=float, required=True)
    three.add_argument('--Mr', type=float, required=True)
    _add_sample_arguments(three)
    three.set_defaults(handler=cmd_three)

    norms = sub.add_parser('norms', help='Norm table of the extremal spline')
    _add_params_arguments(norms)
    norms.set_defaults(handler=cmd_norms)

    sample = sub.add_parser('sample', help='Sample the extremal spline and its derivatives')
    _add_params_arguments(sample)
    sample.add_argument('--n', type=int, default=100, help='Number of intervals (n+1 rows)')
    sample.add_argument('--csv', type=str, default=None)
    sample.add_argument('--format', choices=['csv', 'json'], default='csv')
    sample.set_defaults(handler=cmd_sample)

    selftest = sub.add_parser('selftest', help='Three-norm inequality sweep over random class members')
    selftest.add_argument('--trials', type=int, default=1000)
    selftest.add_argument('--seed', type=int, default=0)
    selftest.add_argument('--r-min', type=int, default=SWEEP_R_RANGE[0], dest='r_min')
    selftest.add_argument('--r-max', type=int, default=SWEEP_R_RANGE[1], dest='r_max')
    selftest.add_argument('--atoms', type=int, default=DEFAULT_ATOMS)
    selftest.add_argument('--threads', type=int, default=THREADS)
    selftest.add_argument('--report', type=str, default=None, help='JSON-lines report path (stdout if omitted)')
    selftest.set_defaults(handler=cmd_selftest)

    return parser


def _failure(code: int, message: str, runId: str, phase: str) -> int:
    logSolveError(runId, message, phase)
    print(message, file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setupLogging(level=args.log_level)
    args.tol = max(args.tol, TOL_FLOOR)
    runId = uuid.uuid4().hex[:8]
    handler: Callable[[argparse.Namespace], int] = args.handler
    started = logSolveStart(runId, args.command, {k: v for k, v in vars(args).items() if k != 'handler'})

    try:
        code = handler(args)
    except InfeasibleProblemError as e:
        if e.report is not None:
            _emit(e.report.to_json_dict())
        return _failure(EXIT_INFEASIBLE, str(e), runId, args.command)
    except InfeasibleTripleError as e:
        return _failure(EXIT_INFEASIBLE, str(e), runId, args.command)
    except ArgumentError as e:
        return _failure(EXIT_USAGE, f"Invalid arguments: {str(e)}", runId, 'validation')
    except (NoConvergenceError, InternalCheckError) as e:
        logDebug('DEBUG', traceback.format_exc(), runId)
        return _failure(EXIT_NUMERICAL, f"Numerical failure: {str(e)}", runId, args.command)
    except OSError as e:
        return _failure(EXIT_NUMERICAL, f"I/O failure: {str(e)}", runId, 'output')

    logSolveEnd(runId, args.command, started, {'exit': code})
    return code
