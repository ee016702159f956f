"""Desk-scale experiments for incompressibility-method bounds."""

__version__ = "0.1.0"
