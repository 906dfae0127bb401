"""Numerical workbench for weighted Bergman spaces and integrals of weighted composition operators."""

__version__ = "0.1.0"
