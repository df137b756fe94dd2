#!/usr/bin/env python3
"""Setup script for the pclq package."""

from setuptools import setup

if __name__ == "__main__":
    setup()
