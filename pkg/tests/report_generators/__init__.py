"""Report generator tests package."""
