"""Supersingular primes of abelian surfaces: exact checks and censuses."""

__version__ = "0.1.0"
