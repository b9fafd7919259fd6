"""Configuration management for mmassoc."""

from mmassoc.config.settings import Settings, settings

__all__ = ["Settings", "settings"]
