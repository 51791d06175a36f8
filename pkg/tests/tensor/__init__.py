"""Tensor tests package."""
