"""Monotone Kolmogorov toolkit: extremal splines, three-norm solver and feasibility oracle."""

from .errors import (
    ArgumentError, DomainError, InfeasibleProblemError, InfeasibleTripleError,
    InternalCheckError, KolmogorovError, NoConvergenceError, PreconditionError,
)
from .extremal_family import build_phi1, build_phi_r, norm_table, scale_params
from .models import (
    ClassMember, ExtremalParams, FeasibilityReport, NormProfile, Problem3,
    Problem4, SolveRequest, SolveResult, TruncatedPower, Witness,
)
from .oracle import build_Phi, check_lemma3, decide, decide_three, synthesize, synthesize_three
from .poly_core import PiecewisePolynomial, antiderivative, derivative, evaluate, sup_norm_halfline
from .solver import check_olov, solve_b_zero, solve_inner_a, solve_outer_b
from .verify import property_sweep, quad_norm, random_member

__all__ = [
    'ArgumentError',
    'DomainError',
    'InfeasibleProblemError',
    'InfeasibleTripleError',
    'InternalCheckError',
    'KolmogorovError',
    'NoConvergenceError',
    'PreconditionError',
    'build_phi1',
    'build_phi_r',
    'norm_table',
    'scale_params',
    'ClassMember',
    'ExtremalParams',
    'FeasibilityReport',
    'NormProfile',
    'Problem3',
    'Problem4',
    'SolveRequest',
    'SolveResult',
    'TruncatedPower',
    'Witness',
    'build_Phi',
    'check_lemma3',
    'decide',
    'decide_three',
    'synthesize',
    'synthesize_three',
    'PiecewisePolynomial',
    'antiderivative',
    'derivative',
    'evaluate',
    'sup_norm_halfline',
    'check_olov',
    'solve_b_zero',
    'solve_inner_a',
    'solve_outer_b',
    'property_sweep',
    'quad_norm',
    'random_member',
]
