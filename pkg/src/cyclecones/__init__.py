"""Exact arithmetic for cones of cycles on blowups of projective space
along general lines and points."""

__version__ = "0.1.0"
