"""Bracketing and bisection helpers for continuous scalar functions."""

import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from ..errors import NoConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BisectionResult:
    root: float
    lo: float
    hi: float
    f_lo: float
    f_hi: float
    iterations: int


def expand_right(f: Callable[[float], float], anchor: float, f_anchor: float,
                 width: float, cap: float) -> Tuple[float, float, float, float, int]:
    """Double the width right of anchor until f stops being negative.

    f(anchor) must be negative. The left end advances through every point that
    stayed negative, so the bracket holds the first sign change seen. A step
    landing exactly on a root ends the search with f_hi == 0.

    Returns:
        (lo, hi, f_lo, f_hi, evaluations)
    """
    if f_anchor >= 0:
        raise NoConvergenceError(f"Bracket anchor {anchor} is not below the target (f={f_anchor})")

    lo, f_lo = anchor, f_anchor
    evaluations = 0
    while width <= cap:
        hi = anchor + width
        f_hi = f(hi)
        evaluations += 1
        if f_hi >= 0:
            return lo, hi, f_lo, f_hi, evaluations
        lo, f_lo = hi, f_hi
        width *= 2.0

    logger.warning(f"Bracket expansion from {anchor} exceeded width cap {cap:g}")
    raise NoConvergenceError(
        f"No sign change found right of {anchor} within width {cap:g}"
    )


def bisect_sign_change(f: Callable[[float], float], lo: float, hi: float,
                       f_lo: float, f_hi: float, xtol: float, ftol: float,
                       max_iter: int) -> BisectionResult:
    """Bisect a bracket with f(lo) < 0 < f(hi) (or the reverse).

    Stops once |f(mid)| <= ftol or hi - lo <= xtol. An end where f vanishes is
    returned as the root. Otherwise the root is the midpoint of the returned
    bracket, whose ends keep opposite signs.
    """
    if f_lo * f_hi > 0:
        raise NoConvergenceError(f"No sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")
    if f_lo == 0:
        return BisectionResult(lo, lo, hi, f_lo, f_hi, 0)
    if f_hi == 0:
        return BisectionResult(hi, lo, hi, f_lo, f_hi, 0)

    for iteration in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or not lo < mid < hi:
            return BisectionResult(mid, lo, hi, f_lo, f_hi, iteration)
        f_mid = f(mid)
        if abs(f_mid) <= ftol:
            return BisectionResult(mid, lo, hi, f_lo, f_hi, iteration)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    raise NoConvergenceError(
        f"Bisection did not settle within {max_iter} iterations on [{lo}, {hi}]"
    )
