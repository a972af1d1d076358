"""Exact computer algebra for finite A-infinity categories and their deformations."""

__version__ = "0.1.0"
