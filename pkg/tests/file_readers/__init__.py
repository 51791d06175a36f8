"""File reader tests package."""
