"""K-theory calculator for generalized lamplighter group C*-algebras and full-shift crossed products."""

__version__ = "0.1.0"
