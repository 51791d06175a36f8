"""Neural network building block tests package."""
