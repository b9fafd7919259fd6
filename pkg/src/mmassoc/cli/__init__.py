"""CLI interface for mmassoc."""

from mmassoc.cli.app import app, main

__all__ = ["app", "main"]
