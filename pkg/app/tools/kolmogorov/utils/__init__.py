"""Utility helpers for the monotone Kolmogorov toolkit."""
