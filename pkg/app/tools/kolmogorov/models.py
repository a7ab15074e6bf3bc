"""Domain types for the monotone Kolmogorov toolkit."""

import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from .errors import ArgumentError
from .poly_core import PiecewisePolynomial, add_constant

_EPS = sys.float_info.epsilon


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ArgumentError(f"{name} must be finite, got {value}")
    return value


def _require_positive(name: str, value: float) -> float:
    value = _require_finite(name, value)
    if value <= 0:
        raise ArgumentError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class ExtremalParams:
    """Parameters (a, b, l) of the extremal spline of order r.

    gap is the rising width a - b. It defaults to the float difference; solvers
    that know it more precisely than a and b can hold pass it in.
    """

    r: int
    a: float
    b: float
    l: float
    gap: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ArgumentError(f"Order r must be an integer >= 1, got {self.r}")
        a = _require_positive('a', self.a)
        b = _require_finite('b', self.b)
        l = _require_positive('l', self.l)
        if not 0 <= b < a:
            raise ArgumentError(f"Extremal parameters need a > b >= 0, got a={a}, b={b}")
        gap = a - b if self.gap is None else _require_positive('gap', self.gap)
        if abs(gap - (a - b)) > 16.0 * _EPS * a:
            raise ArgumentError(f"Gap {gap} disagrees with a - b = {a - b}")
        object.__setattr__(self, 'r', int(self.r))
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'l', l)
        object.__setattr__(self, 'gap', gap)

    def with_order(self, r: int) -> 'ExtremalParams':
        return ExtremalParams(r, self.a, self.b, self.l, self.gap)

    def to_json_dict(self) -> Dict[str, float]:
        return {'a': self.a, 'b': self.b, 'l': self.l}


@dataclass(frozen=True)
class NormProfile:
    """Sup-norms of derivatives, keyed by derivative order."""

    entries: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for k, value in self.entries.items():
            if int(k) != k or k < 0:
                raise ArgumentError(f"Derivative orders must be non-negative integers, got {k}")
            value = _require_finite(f"Norm at order {k}", value)
            if value < 0:
                raise ArgumentError(f"Norm at order {k} must be non-negative, got {value}")
            cleaned[int(k)] = value
        object.__setattr__(self, 'entries', dict(sorted(cleaned.items())))

    def __getitem__(self, k: int) -> float:
        try:
            return self.entries[k]
        except KeyError:
            raise ArgumentError(f"No norm recorded at order {k}; have {self.orders}")

    def __contains__(self, k: int) -> bool:
        return k in self.entries

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(self.entries)

    def restrict(self, orders: Iterable[int]) -> 'NormProfile':
        return NormProfile({k: self[k] for k in orders})

    def scaled(self, r: int, lam: float, mu: float) -> 'NormProfile':
        """Entry k multiplied by mu * lam**(r - k)."""
        return NormProfile({k: mu * lam ** (r - k) * v for k, v in self.entries.items()})

    def to_json_dict(self) -> Dict[str, float]:
        return {str(k): v for k, v in self.entries.items()}

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> 'NormProfile':
        try:
            return cls({int(k): float(v) for k, v in data.items()})
        except (TypeError, ValueError) as e:
            raise ArgumentError(f"Invalid norm profile serialization: {str(e)}")


@dataclass(frozen=True)
class SolveRequest:
    """Three targets at orders j1 < j2 <= r - 2 and r."""

    r: int
    j1: int
    j2: int
    targets: NormProfile

    def __post_init__(self):
        if self.r < 3:
            raise ArgumentError(f"Solve requests need r >= 3, got {self.r}")
        if not 0 <= self.j1 < self.j2 <= self.r - 2:
            raise ArgumentError(
                f"Solve requests need 0 <= j1 < j2 <= r-2, got j1={self.j1}, j2={self.j2}, r={self.r}"
            )
        for k in (self.j1, self.j2, self.r):
            if k not in self.targets or self.targets[k] <= 0:
                raise ArgumentError(f"Target at order {k} must be given and positive")

    @classmethod
    def from_values(cls, r: int, j1: int, j2: int, M_j1: float, M_j2: float, M_r: float) -> 'SolveRequest':
        return cls(r, j1, j2, NormProfile({j1: M_j1, j2: M_j2, r: M_r}))


@dataclass(frozen=True)
class SolveResult:
    params: ExtremalParams
    achieved: NormProfile
    residuals: Dict[int, float]
    iterations: Dict[str, int]
    bracket: Tuple[float, float]

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            'params': self.params.to_json_dict(),
            'achieved': self.achieved.to_json_dict(),
            'residuals': {str(k): v for k, v in self.residuals.items()},
            'iterations': dict(self.iterations),
            'bracket': list(self.bracket),
        }


def _positive_targets(targets: NormProfile, orders: Iterable[int]) -> None:
    for k in orders:
        if k not in targets:
            raise ArgumentError(f"Missing target at order {k}")
        if targets[k] <= 0:
            raise ArgumentError(f"Target at order {k} must be positive, got {targets[k]}")


@dataclass(frozen=True)
class Problem4:
    """Four-number problem at orders 0 < k2 < k3 <= r - 2 and r."""

    r: int
    orders: Tuple[int, int, int, int]
    targets: NormProfile

    def __post_init__(self):
        k1, k2, k3, k4 = self.orders
        if k1 != 0 or k4 != self.r:
            raise ArgumentError(f"Orders must start at 0 and end at r={self.r}, got {self.orders}")
        if not 0 < k2 < k3 <= self.r - 2:
            raise ArgumentError(
                f"Orders need 0 < k2 < k3 <= r-2 (k3 = r-1 is not supported), got k2={k2}, k3={k3}, r={self.r}"
            )
        _positive_targets(self.targets, self.orders)
        object.__setattr__(self, 'orders', tuple(int(k) for k in self.orders))

    @classmethod
    def from_values(cls, r: int, k2: int, k3: int, M0: float, Mk2: float, Mk3: float, Mr: float) -> 'Problem4':
        return cls(r, (0, k2, k3, r), NormProfile({0: M0, k2: Mk2, k3: Mk3, r: Mr}))

    @property
    def k2(self) -> int:
        return self.orders[1]

    @property
    def k3(self) -> int:
        return self.orders[2]

    def scaled(self, lam: float, mu: float) -> 'Problem4':
        return Problem4(self.r, self.orders, self.targets.scaled(self.r, lam, mu))


@dataclass(frozen=True)
class Problem3:
    """Three-number problem at orders 0 < k < r."""

    r: int
    k: int
    targets: NormProfile

    def __post_init__(self):
        if self.r < 2 or not 0 < self.k < self.r:
            raise ArgumentError(f"Orders need 0 < k < r, got k={self.k}, r={self.r}")
        _positive_targets(self.targets, (0, self.k, self.r))

    @classmethod
    def from_values(cls, r: int, k: int, M0: float, Mk: float, Mr: float) -> 'Problem3':
        return cls(r, k, NormProfile({0: M0, k: Mk, r: Mr}))

    @property
    def orders(self) -> Tuple[int, int, int]:
        return (0, self.k, self.r)


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict with both inequality slacks.

    phi_norm, slack_outer and params stay None when the inner inequality already
    fails; failed names the violated inequality ('inner' or 'outer').
    """

    feasible: bool
    slack_inner: float
    phi_norm: Optional[float] = None
    slack_outer: Optional[float] = None
    params: Optional[ExtremalParams] = None
    failed: Optional[str] = None

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            'feasible': self.feasible,
            'slack_inner': self.slack_inner,
            'phi_norm': self.phi_norm,
            'slack_outer': self.slack_outer,
            'params': self.params.to_json_dict() if self.params else None,
            'failed': self.failed,
        }


@dataclass(frozen=True)
class Witness:
    spline: PiecewisePolynomial
    shift: float
    achieved: NormProfile
    params: ExtremalParams

    def realized(self) -> PiecewisePolynomial:
        """spline + shift"""
        return add_constant(self.spline, self.shift)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            'spline': self.spline.to_json_dict(),
            'shift': self.shift,
            'achieved': self.achieved.to_json_dict(),
            'params': self.params.to_json_dict(),
            'r': self.params.r,
        }


@dataclass(frozen=True)
class TruncatedPower:
    """c * (t + alpha)_+^r / r!"""

    alpha: float
    c: float

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _require_positive('alpha', self.alpha))
        object.__setattr__(self, 'c', _require_positive('c', self.c))

    def realize(self, r: int) -> PiecewisePolynomial:
        return PiecewisePolynomial.truncated_power(self.alpha, self.c, r)

    def to_json_dict(self) -> Dict[str, Any]:
        return {'kind': 'power', 'alpha': self.alpha, 'c': self.c}


Atom = Union[ExtremalParams, TruncatedPower]


@dataclass(frozen=True)
class ClassMember:
    """Nonnegative combination of atoms plus a constant, with its realization."""

    r: int
    atoms: Tuple[Atom, ...]
    offset: float
    realized: PiecewisePolynomial

    def __post_init__(self):
        offset = _require_finite('offset', self.offset)
        if offset < 0:
            raise ArgumentError(f"Member offset must be non-negative, got {offset}")
        object.__setattr__(self, 'offset', offset)
        object.__setattr__(self, 'atoms', tuple(self.atoms))

    def to_json_dict(self) -> Dict[str, Any]:
        atoms = []
        for atom in self.atoms:
            if isinstance(atom, ExtremalParams):
                atoms.append(dict(kind='extremal', **atom.to_json_dict()))
            else:
                atoms.append(atom.to_json_dict())
        return {'r': self.r, 'atoms': atoms, 'offset': self.offset}
