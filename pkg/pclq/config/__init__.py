"""Configuration management for the pclq toolkit."""

from .settings import Settings, get_settings

__all__ = ["Settings", "get_settings"]
