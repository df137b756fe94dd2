"""
PC-LQ learning toolkit (pclq).

Identification, soft-thresholding and certainty-equivalent control of
partially controllable linear-quadratic systems.
"""

__version__ = "0.1.0"
