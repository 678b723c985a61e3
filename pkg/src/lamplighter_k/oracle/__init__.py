"""Independent brute-force oracles for finite Γ.

``enumeration`` and ``facts`` work from raw multiplication tables and never use the
grouping code of the formula assembly; ``crosscheck`` compares the two sides.
"""

from .crosscheck import DEFAULT_GRID, ComparisonVerdict, cross_check, run_grid, verify_bijection
from .enumeration import (point_orbit_k, rhs_eq22_literal, rhs_eq22_pairs, subset_orbit_table,
                          wreath_class_count)
from .facts import class_count

__all__ = ["DEFAULT_GRID", "ComparisonVerdict", "cross_check", "run_grid", "verify_bijection",
           "point_orbit_k", "rhs_eq22_literal", "rhs_eq22_pairs", "subset_orbit_table",
           "wreath_class_count", "class_count"]
