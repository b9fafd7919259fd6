"""Utility modules for mmassoc."""
