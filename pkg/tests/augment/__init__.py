"""Augmentation tests package."""
