"""Exact lifted model counting with graph polynomials."""
