"""Exact construction and verification of BMW-type R-matrices and the
associated graded quantum matrix algebras."""

__version__ = "0.1.0"
