"""Pseudospectral simulator and estimate lab for the 1D quantum Zakharov system."""

__version__ = "0.1.0"
