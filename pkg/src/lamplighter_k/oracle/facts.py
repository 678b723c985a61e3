"""The two imported facts the oracles rely on; nothing else analytic enters them.

1. For a finite group H, C*(H) is a direct sum of matrix algebras, one per
   irreducible representation.  Hence K0 is free of rank |con H| and K1 = 0.
2. For a finite group H acting on a finite set Y, C(Y) ⋊ H decomposes over the
   H-orbits, the orbit of y contributing a matrix algebra over C*(Stab_H(y)).
   Hence K0(C(Y) ⋊ H) = ⊕_{orbits} K0(C*(Stab_H(y))).

Class counts are computed here from the raw multiplication table.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ..kformula import FormalKGroup


def class_count(table: np.ndarray, members: Iterable[int]) -> int:
    """Number of conjugacy classes of the subgroup ``members`` of the table's group."""
    m = np.array(sorted(int(x) for x in members), dtype=np.int64)
    sub = table[np.ix_(m, m)]
    e_pos = int(np.nonzero(np.all(sub == m[None, :], axis=1))[0][0])
    e = m[e_pos]
    inv = m[np.argmax(sub == e, axis=1)]
    seen = np.zeros(len(table), dtype=bool)
    count = 0
    for x in m:
        if seen[x]:
            continue
        count += 1
        seen[table[table[m, x], inv]] = True
    return count


def group_algebra_k(table: np.ndarray, members: Iterable[int]) -> FormalKGroup:
    """Fact 1: K_*(C*(H)) = (Z^{|con H|}, 0)."""
    return FormalKGroup.free(class_count(table, members), 0)


def orbit_decomposition_k(table: np.ndarray, stabilizers: Iterable[Iterable[int]]) -> FormalKGroup:
    """Fact 2: sum of K_*(C*(Stab)) over one stabilizer per orbit."""
    total = FormalKGroup()
    cache: dict = {}
    for stab in stabilizers:
        key = tuple(sorted(int(x) for x in stab))
        if key not in cache:
            cache[key] = group_algebra_k(table, key)
        total = total + cache[key]
    return total
