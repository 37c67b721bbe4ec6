"""Polar-coordinate harmonic oscillator eigenstates and their ladder algebra."""

__version__ = "0.1.0"
