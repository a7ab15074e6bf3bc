"""Three-norm matching for the extremal family.

Given targets at orders j1 < j2 <= r-2 and r, find (a, b, l) whose spline
phi_r(a, b, l) has exactly these norms. l is fixed by the top order; for each b
the inner solve picks a = a(b) matching order j2, and the outer solve moves b
until order j1 matches. Both are bracketed bisections taking the first sign
change from the left.
"""

import logging
import math

import numpy as np

from .constants import (
    BRACKET_CAP, FEASIBILITY_TOL, INNER_RESIDUAL_TOL, MAX_BISECTIONS,
    OUTER_STEP_TOL, SOLVE_RESIDUAL_TOL,
)
from .errors import ArgumentError, InfeasibleTripleError, NoConvergenceError
from .extremal_family import norm_table, value_at_origin_from_gap
from .models import ExtremalParams, SolveRequest, SolveResult
from .utils.root_utils import BisectionResult, bisect_sign_change, expand_right

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def _check_orders(r: int, j1: int, j2: int) -> None:
    if not 0 <= j1 < j2 < r:
        raise ArgumentError(f"Orders need 0 <= j1 < j2 < r, got j1={j1}, j2={j2}, r={r}")


def olov_constant(r: int, j1: int, j2: int) -> float:
    """(r-j2)!^((r-j1)/(r-j2)) / (r-j1)!"""
    _check_orders(r, j1, j2)
    return math.factorial(r - j2) ** ((r - j1) / (r - j2)) / math.factorial(r - j1)


def olov_bound(r: int, j1: int, j2: int, M_j2: float, M_r: float) -> float:
    """Smallest admissible norm at order j1 given the norms at j2 and r."""
    exponent = (r - j1) / (r - j2)
    return olov_constant(r, j1, j2) * M_j2 ** exponent * M_r ** ((j1 - j2) / (r - j2))


def check_olov(r: int, j1: int, j2: int, M_j1: float, M_j2: float, M_r: float) -> float:
    """Signed slack M_j1 - bound; non-negative means the triple is admissible."""
    _check_orders(r, j1, j2)
    for name, value in (('M_j1', M_j1), ('M_j2', M_j2), ('M_r', M_r)):
        if not math.isfinite(value) or value <= 0:
            raise ArgumentError(f"{name} must be positive and finite, got {value}")
    return M_j1 - olov_bound(r, j1, j2, M_j2, M_r)


def solve_b_zero(r: int, j: int, M_j: float, M_r: float) -> ExtremalParams:
    """Truncated monomial l (t+a)_+^r / r! matched at orders j and r."""
    if not 0 <= j < r:
        raise ArgumentError(f"Order j must satisfy 0 <= j < r, got j={j}, r={r}")
    if M_j <= 0 or M_r <= 0:
        raise ArgumentError(f"Targets must be positive, got M_j={M_j}, M_r={M_r}")
    a = (math.factorial(r - j) * M_j / M_r) ** (1.0 / (r - j))
    return ExtremalParams(r, a, 0.0, M_r)


def _solve_inner(r: int, j2: int, b: float, M_j2: float, l: float) -> BisectionResult:
    """Bisection for the gap d = a - b, so d keeps full precision when b >> d."""
    def residual(d: float) -> float:
        return value_at_origin_from_gap(r, j2, d, b, l) - M_j2

    # psi vanishes at d = 0: the tent has no support
    lo, hi, f_lo, f_hi, _ = expand_right(residual, 0.0, -M_j2, 1.0, BRACKET_CAP)
    return bisect_sign_change(
        residual, lo, hi, f_lo, f_hi,
        xtol=0.0, ftol=INNER_RESIDUAL_TOL * M_j2,
        max_iter=MAX_BISECTIONS,
    )


def solve_inner_gap(r: int, j2: int, b: float, M_j2: float, l: float) -> float:
    """d > 0 with phi_r^(j2)(b + d, b, l; 0) = M_j2."""
    if not 0 <= j2 <= r - 2:
        raise ArgumentError(f"Inner order needs 0 <= j2 <= r-2, got j2={j2}, r={r}")
    if b < 0 or M_j2 <= 0 or l <= 0:
        raise ArgumentError(f"Inner solve needs b >= 0, M_j2 > 0, l > 0; got b={b}, M_j2={M_j2}, l={l}")
    return _solve_inner(r, j2, b, M_j2, l).root


def solve_inner_a(r: int, j2: int, b: float, M_j2: float, l: float) -> float:
    """a > b with phi_r^(j2)(a, b, l; 0) = M_j2."""
    return b + solve_inner_gap(r, j2, b, M_j2, l)


def outer_norm(r: int, j1: int, j2: int, b: float, M_j2: float, l: float) -> float:
    """Norm at order j1 of phi_r(a(b), b, l), a(b) from the inner solve."""
    d = solve_inner_gap(r, j2, b, M_j2, l)
    return value_at_origin_from_gap(r, j1, d, b, l)


def solve_outer_b(request: SolveRequest, tol: float = FEASIBILITY_TOL) -> SolveResult:
    """Extremal parameters matching the request's three targets.

    Targets are first rescaled so the norms at j2 and r are 1; the unit
    solution is mapped back by the same lam and mu (see scale_params).
    """
    r, j1, j2 = request.r, request.j1, request.j2
    M1, M2, Mr = request.targets[j1], request.targets[j2], request.targets[r]

    slack = check_olov(r, j1, j2, M1, M2, Mr)
    if slack < -tol * M1:
        logger.warning(f"Infeasible triple at orders ({j1}, {j2}, {r}): slack {slack:.3e}")
        raise InfeasibleTripleError(
            f"Targets violate the three-norm inequality at orders ({j1}, {j2}, {r}) with slack {slack:.6e}",
            slack,
        )

    mu = Mr
    lam = (M2 / Mr) ** (1.0 / (r - j2))
    m1 = M1 / (mu * lam ** (r - j1))
    boundary = abs(slack) <= tol * M1
    iterations = {'inner': 0, 'outer': 0}

    if boundary:
        logger.debug(f"Boundary triple at orders ({j1}, {j2}, {r}); using b = 0")
        b, d = 0.0, solve_b_zero(r, j2, 1.0, 1.0).a
        bracket = (0.0, 0.0)
    else:
        def residual(b: float) -> float:
            inner = _solve_inner(r, j2, b, 1.0, 1.0)
            iterations['inner'] += inner.iterations
            return value_at_origin_from_gap(r, j1, inner.root, b, 1.0) - m1

        lo, hi, f_lo, f_hi, steps = expand_right(residual, 0.0, residual(0.0), 1.0, BRACKET_CAP)
        result = bisect_sign_change(
            residual, lo, hi, f_lo, f_hi,
            xtol=OUTER_STEP_TOL * max(1.0, hi), ftol=OUTER_STEP_TOL * m1,
            max_iter=MAX_BISECTIONS,
        )
        iterations['outer'] = steps + result.iterations
        b = result.root
        d = solve_inner_gap(r, j2, b, 1.0, 1.0)
        bracket = (result.lo, result.hi)

    # The gap is passed on; a - b alone loses it when b >> d
    params = ExtremalParams(r, lam * b + lam * d, lam * b, mu, lam * d)
    achieved = norm_table(params)
    residuals = {k: abs(achieved[k] - request.targets[k]) / request.targets[k] for k in (j1, j2, r)}

    # On the boundary the order-j1 residual is the accepted slack itself
    checked = (j2, r) if boundary else (j1, j2, r)
    worst = max(residuals[k] for k in checked)
    if worst > SOLVE_RESIDUAL_TOL:
        logger.error(f"Solve at orders ({j1}, {j2}, {r}) missed its targets: residuals {residuals}")
        raise NoConvergenceError(
            f"Solved parameters {params} miss the targets by {worst:.3e} relative"
        )

    logger.debug(f"Solved ({j1}, {j2}, {r}) -> a={params.a:.6g}, b={params.b:.6g}, l={params.l:.6g}")
    return SolveResult(params, achieved, residuals, iterations, (lam * bracket[0], lam * bracket[1]))
