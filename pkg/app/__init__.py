"""Feasibility of prescribed derivative norms for multiply monotone functions."""

__version__ = '0.1.0'
