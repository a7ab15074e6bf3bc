"""Feasibility decisions and witness synthesis for prescribed derivative norms.

A four-number problem (M_0, M_k2, M_k3, M_r) is feasible exactly when the
three-norm inequality holds at orders (k2, k3, r) and M_0 is at least the norm
of the extremal spline Phi matched at those three orders. The witness is Phi
lifted by the constant M_0 - ||Phi||.
"""

import logging
from typing import Iterable, Tuple

from .constants import FEASIBILITY_TOL, WITNESS_MATCH_TOL
from .errors import ArgumentError, InfeasibleProblemError, InternalCheckError
from .extremal_family import build_phi_r, norm_table
from .models import (
    ExtremalParams, FeasibilityReport, NormProfile, Problem3, Problem4,
    SolveRequest, Witness,
)
from .poly_core import PiecewisePolynomial
from .solver import check_olov, olov_bound, solve_b_zero, solve_outer_b
from .utils.logging_utils import logCalculationResult

logger = logging.getLogger(__name__)


def build_Phi(r: int, k2: int, k3: int, M_k2: float, M_k3: float, M_r: float,
              tol: float = FEASIBILITY_TOL) -> Tuple[ExtremalParams, PiecewisePolynomial]:
    """Extremal spline with norms M_k2, M_k3, M_r at orders k2, k3, r."""
    result = solve_outer_b(SolveRequest.from_values(r, k2, k3, M_k2, M_k3, M_r), tol=tol)
    return result.params, build_phi_r(result.params)


def decide(problem: Problem4, tol: float = FEASIBILITY_TOL) -> FeasibilityReport:
    """Feasibility verdict; infeasibility is returned, never raised."""
    r, k2, k3 = problem.r, problem.k2, problem.k3
    targets = problem.targets
    M0, Mk2, Mk3, Mr = (targets[k] for k in problem.orders)

    slack_inner = check_olov(r, k2, k3, Mk2, Mk3, Mr)
    if slack_inner < -tol * Mk2:
        logger.debug(f"Problem {targets.to_json_dict()} fails the inner inequality by {slack_inner:.3e}")
        return FeasibilityReport(False, slack_inner, failed='inner')

    result = solve_outer_b(SolveRequest(r, k2, k3, targets.restrict((k2, k3, r))), tol=tol)
    phi_norm = result.achieved[0]
    slack_outer = M0 - phi_norm
    feasible = slack_outer >= -tol * M0
    return FeasibilityReport(
        feasible, slack_inner, phi_norm, slack_outer, result.params,
        None if feasible else 'outer',
    )


def _assemble_witness(params: ExtremalParams, targets: NormProfile,
                      orders: Iterable[int], tol: float) -> Witness:
    table = norm_table(params)
    phi_norm = table[0]
    shift = max(targets[0] - phi_norm, 0.0)

    achieved = dict(table.entries)
    achieved[0] = phi_norm + shift
    achieved = NormProfile(achieved)

    limit = max(WITNESS_MATCH_TOL, 2.0 * tol)
    for k in orders:
        mismatch = abs(achieved[k] - targets[k]) / targets[k]
        if mismatch > limit:
            logger.error(f"Witness misses order {k}: achieved {achieved[k]!r}, target {targets[k]!r}")
            raise InternalCheckError(
                f"Witness norm at order {k} is {achieved[k]:.12g}, target {targets[k]:.12g}"
            )

    logCalculationResult(
        {'targets': targets.to_json_dict()},
        {'params': params.to_json_dict(), 'shift': shift},
    )
    return Witness(build_phi_r(params), shift, achieved, params)


def synthesize(problem: Problem4, tol: float = FEASIBILITY_TOL) -> Witness:
    """Phi + (M_0 - ||Phi||) for a feasible problem."""
    report = decide(problem, tol=tol)
    if not report.feasible:
        raise InfeasibleProblemError(
            f"No witness exists: the {report.failed} inequality fails", report
        )
    return _assemble_witness(report.params, problem.targets, problem.orders, tol)


def check_lemma3(r: int, k1: int, k2: int, profile: NormProfile) -> float:
    """Three-norm slack of an arbitrary measured profile at orders (k1, k2, r)."""
    if not 0 <= k1 < k2 < r:
        raise ArgumentError(f"Orders need 0 <= k1 < k2 < r, got k1={k1}, k2={k2}, r={r}")
    if profile[k2] <= 0 or profile[r] <= 0:
        raise ArgumentError(f"Norms at orders {k2} and {r} must be positive for the comparison")
    return profile[k1] - olov_bound(r, k1, k2, profile[k2], profile[r])


def decide_three(problem: Problem3, tol: float = FEASIBILITY_TOL) -> FeasibilityReport:
    """Three-number problem at orders (0, k, r): only the sharp inequality matters."""
    r, k = problem.r, problem.k
    M0, Mk, Mr = (problem.targets[o] for o in problem.orders)

    slack = check_olov(r, 0, k, M0, Mk, Mr)
    params = solve_b_zero(r, k, Mk, Mr)
    phi_norm = norm_table(params)[0]
    feasible = slack >= -tol * M0
    return FeasibilityReport(
        feasible, slack, phi_norm, M0 - phi_norm, params,
        None if feasible else 'inner',
    )


def synthesize_three(problem: Problem3, tol: float = FEASIBILITY_TOL) -> Witness:
    report = decide_three(problem, tol=tol)
    if not report.feasible:
        raise InfeasibleProblemError("No witness exists: the three-norm inequality fails", report)
    return _assemble_witness(report.params, problem.targets, problem.orders, tol)
