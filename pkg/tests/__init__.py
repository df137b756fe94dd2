"""Test package for pclq."""
