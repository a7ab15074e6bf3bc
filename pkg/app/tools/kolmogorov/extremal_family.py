"""Extremal splines: the tent phi_1 and its iterated antiderivatives phi_r.

phi_1(a, b, l; t) = l * ((t + a)_+ - 2 (t + b)_+)_+ rises with slope l on
[-a, -b], falls with slope -l until it reaches zero at a - 2b (or until the
origin), and vanishes elsewhere on the half-line.
"""

import logging
import math
from typing import List

from .constants import BREAKPOINT_MERGE_TOL
from .errors import ArgumentError
from .models import ExtremalParams, NormProfile
from .poly_core import PiecewisePolynomial, antiderivative

logger = logging.getLogger(__name__)


def build_phi1(params: ExtremalParams) -> PiecewisePolynomial:
    """The tent phi_1(a, b, l; .); params.r is ignored."""
    a, b, l, d = params.a, params.b, params.l, params.gap
    cut = min(d - b, 0.0)
    pieces = [
        (-a, -b, (0.0, l)),
        (-b, cut, (l * d, -l)),
        (cut, 0.0, (0.0,)),
    ]

    # Pieces narrower than the merge tolerance collapse into their neighbour
    tol = BREAKPOINT_MERGE_TOL * max(1.0, a)
    kept = [(left, coeffs) for left, right, coeffs in pieces if right - left > tol]
    knots = tuple(left for left, _ in kept) + (0.0,)
    segments = tuple(coeffs for _, coeffs in kept)
    return PiecewisePolynomial(knots, segments, 0.0)


def derivative_chain(params: ExtremalParams) -> List[PiecewisePolynomial]:
    """[phi_1, phi_2, ..., phi_r]; entry i is the (r-1-i)-th derivative of phi_r."""
    chain = [build_phi1(params)]
    for _ in range(params.r - 1):
        chain.append(antiderivative(chain[-1]))
    return chain


def build_phi_r(params: ExtremalParams) -> PiecewisePolynomial:
    return derivative_chain(params)[-1]


def norm_table(params: ExtremalParams) -> NormProfile:
    """Sup-norms of phi_r^(k) for k = 0..r.

    Orders up to r-2 are nondecreasing on the half-line, so their norms are the
    values at the origin, taken in closed form from the gap. The top two orders
    are the tent peak l * gap and the slope l.
    """
    r = params.r
    entries = {k: value_at_origin(params, k) for k in range(r - 1)}
    entries[r - 1] = params.l * params.gap
    entries[r] = params.l
    return NormProfile(entries)


def value_at_origin(params: ExtremalParams, k: int) -> float:
    """phi_r^(k)(0) for k <= r-2 without building the spline.

    The rising edge contributes a Taylor sum about the peak -b and the falling
    edge a closed-form integral, every term nonnegative.
    """
    return value_at_origin_from_gap(params.r, k, params.gap, params.b, params.l)


def value_at_origin_from_gap(r: int, k: int, d: float, B: float, l: float) -> float:
    """value_at_origin with the rising width d = a - b given directly.

    Keeps full precision when b is large against d.
    """
    if not 0 <= k <= r - 2:
        raise ArgumentError(f"value_at_origin needs 0 <= k <= r-2, got k={k}, r={r}")
    if d < 0 or B < 0:
        raise ArgumentError(f"Gap and peak offset must be non-negative, got d={d}, b={B}")

    m = r - k

    rising = sum(
        l * d ** (m - i) / math.factorial(m - i) * B ** i / math.factorial(i)
        for i in range(m - 1)
    )

    if d >= B:
        # Falling edge reaches the origin
        falling = (d - B) * B ** (m - 1) / (m - 1) + B ** m / m
    else:
        e = B - d
        falling = sum(
            math.comb(m - 2, j) * e ** (m - 2 - j) * d ** (j + 2) / (j + 2)
            for j in range(m - 1)
        )
    return rising + l * falling / math.factorial(m - 2)


def scale_params(params: ExtremalParams, lam: float, mu: float) -> ExtremalParams:
    """(r, lam*a, lam*b, mu*l); norm k scales by mu * lam**(r-k)."""
    if lam <= 0 or mu <= 0:
        raise ArgumentError(f"Scale factors must be positive, got lam={lam}, mu={mu}")
    return ExtremalParams(params.r, lam * params.a, lam * params.b, mu * params.l, lam * params.gap)
