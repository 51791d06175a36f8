"""Utility tests package."""
