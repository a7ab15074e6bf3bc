"""Computational tools."""
