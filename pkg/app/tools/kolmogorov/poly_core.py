"""Piecewise polynomials on the half-line (-inf, 0].

Every function in the toolkit (extremal splines, witnesses, random class
members) is a PiecewisePolynomial. Coefficients are stored per segment in
coordinates local to the segment's left endpoint, so segment ``i`` represents
``sum(c[j] * (t - t_i)**j)`` on ``[t_i, t_{i+1})``.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .constants import BREAKPOINT_MERGE_TOL, CRITICAL_POINT_GRID, MAX_BISECTIONS
from .errors import ArgumentError, DomainError, PreconditionError
from .utils.root_utils import bisect_sign_change

logger = logging.getLogger(__name__)


def _trim(coeffs: Iterable[float]) -> Tuple[float, ...]:
    arr = np.asarray(list(coeffs), dtype=float)
    if arr.size == 0:
        return (0.0,)
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"Segment coefficients must be finite: {arr.tolist()}")
    return tuple(float(c) for c in P.polytrim(arr, tol=0))


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Immutable piecewise polynomial on (-inf, 0] with a constant left tail."""

    breakpoints: Tuple[float, ...]
    segments: Tuple[Tuple[float, ...], ...]
    left_tail_value: float = 0.0

    def __post_init__(self):
        knots = tuple(float(t) for t in self.breakpoints)
        if not knots:
            raise ArgumentError("At least one breakpoint is required")
        if not all(math.isfinite(t) for t in knots):
            raise ArgumentError(f"Breakpoints must be finite: {knots}")
        if any(right <= left for left, right in zip(knots, knots[1:])):
            raise ArgumentError(f"Breakpoints must be strictly increasing: {knots}")
        if knots[-1] > 0:
            raise DomainError(f"Breakpoints must lie in the half-line t <= 0: {knots}")

        expected = len(knots) - 1 + (1 if knots[-1] < 0 else 0)
        if len(self.segments) != expected:
            raise ArgumentError(
                f"Expected {expected} segments for {len(knots)} breakpoints, got {len(self.segments)}"
            )

        tail = float(self.left_tail_value)
        if not math.isfinite(tail):
            raise ArgumentError(f"Left tail value must be finite: {tail}")

        object.__setattr__(self, 'breakpoints', knots)
        object.__setattr__(self, 'segments', tuple(_trim(c) for c in self.segments))
        object.__setattr__(self, 'left_tail_value', tail)

    @classmethod
    def constant(cls, value: float) -> 'PiecewisePolynomial':
        return cls((0.0,), (), value)

    @classmethod
    def truncated_power(cls, alpha: float, coefficient: float, degree: int) -> 'PiecewisePolynomial':
        """c * (t + alpha)_+^degree / degree!"""
        if alpha <= 0:
            raise ArgumentError(f"Truncated power shift must be positive, got {alpha}")
        if degree < 0:
            raise ArgumentError(f"Truncated power degree must be non-negative, got {degree}")
        coeffs = [0.0] * degree + [coefficient / math.factorial(degree)]
        return cls((-float(alpha),), (tuple(coeffs),), 0.0)

    @property
    def degree(self) -> int:
        if not self.segments:
            return 0
        return max(len(c) - 1 for c in self.segments)

    def segment_bounds(self) -> List[Tuple[float, float]]:
        knots = self.breakpoints
        bounds = []
        for i in range(len(self.segments)):
            right = knots[i + 1] if i + 1 < len(knots) else 0.0
            bounds.append((knots[i], right))
        return bounds

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            'breakpoints': list(self.breakpoints),
            'segments': [list(c) for c in self.segments],
            'left_tail': self.left_tail_value,
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> 'PiecewisePolynomial':
        try:
            return cls(
                tuple(data['breakpoints']),
                tuple(tuple(c) for c in data['segments']),
                data.get('left_tail', 0.0),
            )
        except (KeyError, TypeError) as e:
            raise ArgumentError(f"Invalid piecewise polynomial serialization: {str(e)}")


def merge_breakpoints(knots: Sequence[float], tol: float) -> List[float]:
    """Sort knots and drop any lying within tol of the previously kept one."""
    merged: List[float] = []
    for t in sorted(float(k) for k in knots):
        if merged and t - merged[-1] <= tol:
            continue
        merged.append(t)
    return merged


def _segment_index(p: PiecewisePolynomial, t: float) -> int:
    return min(bisect.bisect_right(p.breakpoints, t) - 1, len(p.segments) - 1)


def evaluate(p: PiecewisePolynomial, t: float) -> float:
    t = float(t)
    if t > 0:
        raise DomainError(f"Evaluation point {t} lies outside the half-line t <= 0")
    if t <= p.breakpoints[0] or not p.segments:
        return p.left_tail_value
    i = _segment_index(p, t)
    return float(P.polyval(t - p.breakpoints[i], p.segments[i]))


def evaluate_grid(p: PiecewisePolynomial, ts: Sequence[float]) -> np.ndarray:
    """Vectorized evaluate with the same segment lookup rules."""
    arr = np.asarray(ts, dtype=float)
    if np.any(arr > 0):
        raise DomainError("Evaluation grid contains points outside the half-line t <= 0")
    out = np.full(arr.shape, p.left_tail_value, dtype=float)
    if not p.segments:
        return out

    knots = np.asarray(p.breakpoints)
    idx = np.minimum(np.searchsorted(knots, arr, side='right') - 1, len(p.segments) - 1)
    inside = arr > knots[0]
    for i in np.unique(idx[inside]):
        sel = inside & (idx == i)
        out[sel] = P.polyval(arr[sel] - knots[i], p.segments[i])
    return out


def derivative(p: PiecewisePolynomial) -> PiecewisePolynomial:
    segments = tuple(P.polyder(np.asarray(c)) for c in p.segments)
    return PiecewisePolynomial(p.breakpoints, segments, 0.0)


def antiderivative(p: PiecewisePolynomial) -> PiecewisePolynomial:
    """Antiderivative vanishing on (-inf, t_0]."""
    if p.left_tail_value != 0:
        raise PreconditionError(
            f"Antiderivative from -inf requires a zero left tail, got {p.left_tail_value}"
        )

    accumulated = 0.0
    segments = []
    for (left, right), coeffs in zip(p.segment_bounds(), p.segments):
        integral = P.polyint(np.asarray(coeffs))
        integral[0] += accumulated
        segments.append(integral)
        accumulated = float(P.polyval(right - left, integral))
    return PiecewisePolynomial(p.breakpoints, tuple(segments), 0.0)


def _quadratic_roots(c0: float, c1: float, c2: float) -> List[float]:
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0:
        return []
    # q-form avoids cancellation between -c1 and sqrt(disc)
    q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
    roots = []
    if q != 0:
        roots.append(c0 / q)
    roots.append(q / c2)
    return roots


def _cubic_roots(c0: float, c1: float, c2: float, c3: float) -> List[float]:
    A, B, C = c2 / c3, c1 / c3, c0 / c3
    shift = -A / 3.0
    p_ = B - A * A / 3.0
    q_ = 2.0 * A ** 3 / 27.0 - A * B / 3.0 + C
    disc = (q_ / 2.0) ** 2 + (p_ / 3.0) ** 3
    if disc > 0:
        s = math.sqrt(disc)
        return [float(np.cbrt(-q_ / 2.0 + s) + np.cbrt(-q_ / 2.0 - s)) + shift]
    if p_ == 0:
        return [shift]
    m = 2.0 * math.sqrt(-p_ / 3.0)
    theta = math.acos(max(-1.0, min(1.0, 3.0 * q_ / (p_ * m)))) / 3.0
    return [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]


def critical_points(coeffs: Sequence[float], width: float) -> List[float]:
    """Real roots of the derivative of a local-coordinate polynomial inside (0, width)."""
    d = _trim(P.polyder(np.asarray(coeffs, dtype=float)))
    degree = len(d) - 1
    if degree == 0 or width <= 0:
        return []

    if degree == 1:
        roots = [-d[0] / d[1]]
    elif degree == 2:
        roots = _quadratic_roots(*d)
    elif degree == 3:
        roots = _cubic_roots(*d)
    else:
        xs = np.linspace(0.0, width, CRITICAL_POINT_GRID + 1)
        vals = P.polyval(xs, d)
        roots = [float(x) for x in xs[vals == 0]]
        crossings = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
        f = lambda x: float(P.polyval(x, d))
        for i in crossings:
            result = bisect_sign_change(
                f, float(xs[i]), float(xs[i + 1]), float(vals[i]), float(vals[i + 1]),
                xtol=4.0 * np.finfo(float).eps * max(1.0, width), ftol=0.0,
                max_iter=MAX_BISECTIONS,
            )
            roots.append(result.root)

    return [x for x in roots if math.isfinite(x) and 0.0 < x < width]


def sup_norm_halfline(p: PiecewisePolynomial) -> float:
    """sup over t <= 0 of |p(t)|, from endpoint and critical-point values."""
    best = abs(p.left_tail_value)
    for (left, right), coeffs in zip(p.segment_bounds(), p.segments):
        width = right - left
        candidates = [0.0, width] + critical_points(coeffs, width)
        best = max(best, float(np.max(np.abs(P.polyval(np.asarray(candidates), coeffs)))))
    return best


def breakpoint_jumps(p: PiecewisePolynomial) -> np.ndarray:
    """Right limit minus left limit at every breakpoint, the tail counting as the left piece at t_0."""
    jumps = []
    left_value = p.left_tail_value
    for (left, right), coeffs in zip(p.segment_bounds(), p.segments):
        jumps.append(coeffs[0] - left_value)
        left_value = float(P.polyval(right - left, coeffs))
    return np.asarray(jumps)


def scale(p: PiecewisePolynomial, factor: float) -> PiecewisePolynomial:
    segments = tuple(tuple(factor * c for c in coeffs) for coeffs in p.segments)
    return PiecewisePolynomial(p.breakpoints, segments, factor * p.left_tail_value)


def add_constant(p: PiecewisePolynomial, value: float) -> PiecewisePolynomial:
    segments = tuple((coeffs[0] + value,) + coeffs[1:] for coeffs in p.segments)
    return PiecewisePolynomial(p.breakpoints, segments, p.left_tail_value + value)


def _taylor_shift(coeffs: Sequence[float], shift: float) -> np.ndarray:
    """Coefficients of x -> c(x + shift)."""
    n = len(coeffs)
    out = np.zeros(n)
    for i, c in enumerate(coeffs):
        for j in range(i + 1):
            out[j] += c * math.comb(i, j) * shift ** (i - j)
    return out


def _piece_over(p: PiecewisePolynomial, left: float, right: float) -> np.ndarray:
    """p restricted to [left, right], re-expanded about left."""
    mid = 0.5 * (left + right)
    if not p.segments or mid <= p.breakpoints[0]:
        return np.array([p.left_tail_value])
    i = _segment_index(p, mid)
    return _taylor_shift(p.segments[i], left - p.breakpoints[i])


def add(p: PiecewisePolynomial, q: PiecewisePolynomial) -> PiecewisePolynomial:
    """Pointwise sum over the merged breakpoint set."""
    magnitude = max(1.0, abs(p.breakpoints[0]), abs(q.breakpoints[0]))
    knots = merge_breakpoints(p.breakpoints + q.breakpoints, BREAKPOINT_MERGE_TOL * magnitude)
    bounds = [(knots[i], knots[i + 1] if i + 1 < len(knots) else 0.0)
              for i in range(len(knots) - (0 if knots[-1] < 0 else 1))]
    segments = tuple(
        P.polyadd(_piece_over(p, left, right), _piece_over(q, left, right))
        for left, right in bounds
    )
    return PiecewisePolynomial(tuple(knots), segments, p.left_tail_value + q.left_tail_value)


def sample_grid(p: PiecewisePolynomial, max_order: int, ts: Sequence[float]) -> Dict[int, np.ndarray]:
    """Values of p, p', ..., p^(max_order) on ts."""
    table = {}
    current = p
    for k in range(max_order + 1):
        table[k] = evaluate_grid(current, ts)
        current = derivative(current)
    return table
