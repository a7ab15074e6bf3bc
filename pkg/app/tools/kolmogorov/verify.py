"""Independent norm oracle, random class members and the three-norm sweep.

quad_norm never calls poly_core's derivative or sup-norm code. It reads the
top derivative off divided differences of p, integrates it back down with
Gauss-Legendre quadrature and takes the sup over a dense grid.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre

from config.settings import THREADS

from .constants import (
    DEFAULT_ATOMS, FEASIBILITY_TOL, GAUSS_NODES, MEMBERSHIP_GRID, MEMBERSHIP_TOL,
    OFFSET_RANGE, PEAK_FRACTION_MAX, QUAD_GRID_PER_SEGMENT, QUAD_PANELS,
    SCALE_RANGE, SWEEP_R_RANGE,
)
from .errors import ArgumentError, InternalCheckError, KolmogorovError
from .extremal_family import build_phi_r
from .models import Atom, ClassMember, ExtremalParams, NormProfile, TruncatedPower
from .oracle import check_lemma3
from .poly_core import (
    PiecewisePolynomial, add, add_constant, derivative, evaluate,
    evaluate_grid, sample_grid, sup_norm_halfline,
)
from .utils.logging_utils import logResourceUsage, logSolveEnd, logSolveStart

logger = logging.getLogger(__name__)


# Quadrature oracle

def top_order_norm(p: PiecewisePolynomial, r: int) -> float:
    """Essential sup of p^(r): the largest |leading coefficient * r!|."""
    best = 0.0
    for coeffs in p.segments:
        if len(coeffs) > r:
            best = max(best, abs(coeffs[r]) * math.factorial(r))
    return best


def _exact_value(coeffs: Sequence[float], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * x + Fraction(c)
    return value


def _divided_difference(coeffs: Sequence[float], xs: Sequence[Fraction]) -> Fraction:
    """f[x_0, ..., x_m] of one segment at local abscissae, in exact rational arithmetic."""
    table = [_exact_value(coeffs, x) for x in xs]
    for level in range(1, len(xs)):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(len(table) - 1)
        ]
    return table[0]


def _top_derivative(p: PiecewisePolynomial, r: int) -> List[Tuple[float, float]]:
    """(value at left end, slope) of p^(r-1) on every segment.

    p^(r-1) is affine on a segment of degree <= r, so m! times the m-th divided
    difference over any m+1 nodes equals it at the mean of the nodes. Two
    stencils inside the segment fix the line.
    """
    m = r - 1
    spacing = Fraction(3, 5 * m) if m else Fraction(0)
    pieces = []
    for (left, right), coeffs in zip(p.segment_bounds(), p.segments):
        width = Fraction(right) - Fraction(left)
        points = []
        for start in (Fraction(1, 20), Fraction(7, 20)):
            xs = [width * (start + spacing * i) for i in range(m + 1)]
            centre = sum(xs) / len(xs)
            points.append((centre, math.factorial(m) * _divided_difference(coeffs, xs)))
        (x1, g1), (x2, g2) = points
        slope = (g2 - g1) / (x2 - x1)
        pieces.append((float(g1 - slope * x1), float(slope)))
    return pieces


def _cauchy_integral(g0: float, slope: float, left: float, ts: np.ndarray, n: int,
                     nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Integral over [left, t] of (g0 + slope (s - left)) (t - s)^n / n!, per t."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    total = np.zeros_like(ts)
    span = (ts - left) / QUAD_PANELS
    for panel in range(QUAD_PANELS):
        lo = left + span * panel
        half = 0.5 * span
        s = (lo + half)[:, None] + half[:, None] * nodes[None, :]
        integrand = (g0 + slope * (s - left)) * (ts[:, None] - s) ** n
        total += half * (integrand @ weights)
    return total / math.factorial(n)


def quad_norm(p: PiecewisePolynomial, k: int, r: int) -> float:
    """||p^(k)|| on the half-line by quadrature and dense grid search."""
    if r < 1 or not 0 <= k <= r:
        raise ArgumentError(f"quad_norm needs 0 <= k <= r and r >= 1, got k={k}, r={r}")
    if p.degree > r:
        raise ArgumentError(f"quad_norm needs segments of degree <= r={r}, got {p.degree}")

    if k == r:
        return top_order_norm(p, r)

    best = abs(p.left_tail_value) if k == 0 else 0.0
    if not p.segments:
        return best

    pieces = _top_derivative(p, r)
    bounds = p.segment_bounds()

    if k == r - 1:
        for (left, right), (g0, slope) in zip(bounds, pieces):
            ts = np.linspace(left, right, QUAD_GRID_PER_SEGMENT)
            best = max(best, float(np.max(np.abs(g0 + slope * (ts - left)))))
        return best

    nodes, weights = legendre.leggauss(max(GAUSS_NODES, r))

    # Values of p^(q), q = 0..r-2, at the current knot
    knot_values = [0.0] * (r - 1)
    knot_values[0] = p.left_tail_value
    for (left, right), (g0, slope) in zip(bounds, pieces):
        n = r - 2 - k
        ts = np.linspace(left, right, QUAD_GRID_PER_SEGMENT)
        dt = ts - left
        values = sum(knot_values[k + i] * dt ** i / math.factorial(i) for i in range(n + 1))
        values = values + _cauchy_integral(g0, slope, left, ts, n, nodes, weights)
        best = max(best, float(np.max(np.abs(values))))

        width = right - left
        end = np.array([right])
        knot_values = [
            sum(knot_values[q + i] * width ** i / math.factorial(i) for i in range(r - 1 - q))
            + float(_cauchy_integral(g0, slope, left, end, r - 2 - q, nodes, weights)[0])
            for q in range(r - 1)
        ]
    return best


# Class members

def _grid_for(p: PiecewisePolynomial, points: int = MEMBERSHIP_GRID) -> np.ndarray:
    start = p.breakpoints[0] - 1.0
    ts = np.concatenate([np.linspace(start, 0.0, points), np.asarray(p.breakpoints)])
    return np.unique(ts)


def membership_defect(p: PiecewisePolynomial, r: int) -> float:
    """Most negative scaled value of p, p', ..., p^(r-1) on the grid (0 when none)."""
    worst = 0.0
    for k, values in sample_grid(p, r - 1, _grid_for(p)).items():
        scale = float(np.max(np.abs(values)))
        if scale > 0:
            worst = min(worst, float(np.min(values)) / scale)
    return worst


def assert_member(p: PiecewisePolynomial, r: int) -> None:
    defect = membership_defect(p, r)
    if defect < -MEMBERSHIP_TOL:
        logger.error(f"Function leaves the monotone class of order {r}: defect {defect:.3e}")
        raise InternalCheckError(f"Derivatives of orders 0..{r - 1} are not nonnegative (defect {defect:.3e})")


def _realize_atom(atom: Atom, r: int) -> PiecewisePolynomial:
    if isinstance(atom, ExtremalParams):
        return build_phi_r(atom.with_order(r))
    return atom.realize(r)


def member_from_atoms(r: int, atoms: Sequence[Atom], offset: float = 0.0) -> ClassMember:
    """offset + sum of the atoms, checked against the class."""
    if r < 2:
        raise ArgumentError(f"Class members need r >= 2, got {r}")
    if offset < 0:
        raise ArgumentError(f"Member offset must be non-negative, got {offset}")
    realized = PiecewisePolynomial.constant(0.0)
    for atom in atoms:
        realized = add(realized, _realize_atom(atom, r))
    realized = add_constant(realized, offset)
    assert_member(realized, r)
    return ClassMember(r, tuple(atoms), offset, realized)


def _log_uniform(rng: np.random.Generator, low: float, high: float) -> float:
    return float(np.exp(rng.uniform(np.log(low), np.log(high))))


def random_member(r: int, atoms: int = DEFAULT_ATOMS, seed: int = 0) -> ClassMember:
    """Random nonnegative combination of 1..atoms atoms plus an offset."""
    if atoms < 0:
        raise ArgumentError(f"atoms must be non-negative, got {atoms}")
    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, atoms + 1)) if atoms else 0

    drawn: List[Atom] = []
    for _ in range(count):
        if rng.random() < 0.5:
            a = _log_uniform(rng, *SCALE_RANGE)
            b = float(rng.uniform(0.0, PEAK_FRACTION_MAX * a))
            drawn.append(ExtremalParams(r, a, b, _log_uniform(rng, *SCALE_RANGE)))
        else:
            drawn.append(TruncatedPower(_log_uniform(rng, *SCALE_RANGE), _log_uniform(rng, *SCALE_RANGE)))
    offset = float(rng.uniform(*OFFSET_RANGE))
    return member_from_atoms(r, drawn, offset)


def measure_profile(p: PiecewisePolynomial, r: int) -> NormProfile:
    """Norms of a class member at orders 0..r.

    Orders up to r-2 are read at the origin after a grid check that they are
    nondecreasing; order r-1 uses the exact sup search.
    """
    ts = _grid_for(p)
    entries = {}
    current = p
    for k in range(r):
        if k <= r - 2:
            values = evaluate_grid(current, ts)
            scale = max(float(np.max(np.abs(values))), 1.0)
            if np.min(np.diff(values)) < -MEMBERSHIP_TOL * scale:
                raise InternalCheckError(f"Derivative of order {k} is not nondecreasing")
            entries[k] = abs(evaluate(current, 0.0))
        else:
            entries[k] = sup_norm_halfline(current)
        current = derivative(current)
    entries[r] = top_order_norm(p, r)
    return NormProfile(entries)


# Three-norm sweep

def lemma3_slacks(profile: NormProfile, r: int) -> Tuple[Optional[float], Optional[Tuple[int, int]], int]:
    """Smallest relative slack over pairs k1 < k2 < r, its pair, and the skipped count.

    Pairs whose norms at k2 or r vanish carry no constraint and are skipped.
    """
    min_slack, worst_pair, skipped = None, None, 0
    for k2 in range(1, r):
        for k1 in range(k2):
            if profile[k2] == 0 or profile[r] == 0:
                skipped += 1
                continue
            slack = check_lemma3(r, k1, k2, profile) / (profile[k1] or 1.0)
            if min_slack is None or slack < min_slack:
                min_slack, worst_pair = slack, (k1, k2)
    return min_slack, worst_pair, skipped


@dataclass(frozen=True)
class TrialRecord:
    r: int
    trial: int
    seed: int
    min_slack: Optional[float]
    worst_pair: Optional[Tuple[int, int]]
    skipped: int
    passed: bool
    error: Optional[str] = None


@dataclass
class SweepReport:
    header: Dict[str, Any]
    records: List[TrialRecord] = field(default_factory=list)

    @property
    def min_slack(self) -> Optional[float]:
        slacks = [rec.min_slack for rec in self.records if rec.min_slack is not None]
        return min(slacks) if slacks else None

    @property
    def failing_seeds(self) -> List[int]:
        return [rec.seed for rec in self.records if not rec.passed]

    @property
    def passed(self) -> bool:
        return not self.failing_seeds

    def to_json_lines(self) -> str:
        lines = [json.dumps(dict(kind='header', **self.header), sort_keys=True)]
        for rec in self.records:
            row = asdict(rec)
            row['worst_pair'] = list(rec.worst_pair) if rec.worst_pair else None
            lines.append(json.dumps(dict(kind='trial', **row), sort_keys=True))
        lines.append(json.dumps({
            'kind': 'summary',
            'trials': len(self.records),
            'min_slack': self.min_slack,
            'failing_seeds': self.failing_seeds,
        }, sort_keys=True))
        return '\n'.join(lines) + '\n'


def trial_seed(seed: int, r: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, r, trial]).generate_state(1)[0])


def _run_trial(r: int, trial: int, seed: int, atoms: int) -> TrialRecord:
    member_seed = trial_seed(seed, r, trial)
    try:
        member = random_member(r, atoms, member_seed)
        min_slack, worst_pair, skipped = lemma3_slacks(measure_profile(member.realized, r), r)
    except KolmogorovError as e:
        logger.error(f"Trial {trial} at r={r} (seed {member_seed}) failed: {str(e)}")
        return TrialRecord(r, trial, member_seed, None, None, 0, False, str(e))
    passed = min_slack is None or min_slack >= -FEASIBILITY_TOL
    return TrialRecord(r, trial, member_seed, min_slack, worst_pair, skipped, passed)


def property_sweep(r_range: Tuple[int, int] = SWEEP_R_RANGE, trials: int = 1000, seed: int = 0,
                   atoms: int = DEFAULT_ATOMS, threads: int = THREADS) -> SweepReport:
    """Three-norm inequality over random class members, r_range inclusive."""
    r_min, r_max = r_range
    if trials < 1:
        raise ArgumentError(f"trials must be at least 1, got {trials}")
    if r_min < 2 or r_max < r_min:
        raise ArgumentError(f"r range must satisfy 2 <= r_min <= r_max, got {r_range}")

    header = {
        'r_range': [r_min, r_max],
        'trials': trials,
        'seed': seed,
        'atoms': atoms,
        'membership_grid': MEMBERSHIP_GRID,
        'quad_grid_per_segment': QUAD_GRID_PER_SEGMENT,
        'slack_tolerance': FEASIBILITY_TOL,
        'membership_tolerance': MEMBERSHIP_TOL,
    }
    runId = f"sweep-{seed}"
    started = logSolveStart(runId, 'property sweep', header)

    tasks = [(r, trial) for r in range(r_min, r_max + 1) for trial in range(trials)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        records = list(pool.map(lambda task: _run_trial(task[0], task[1], seed, atoms), tasks))

    report = SweepReport(header, records)
    logResourceUsage(runId, 'property sweep')
    logSolveEnd(runId, 'property sweep', started, {
        'min_slack': report.min_slack, 'failures': len(report.failing_seeds),
    })
    return report
