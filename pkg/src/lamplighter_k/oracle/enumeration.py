"""Brute-force K-theory of finite-data crossed products, straight from the definitions.

Everything here works on the raw multiplication table of a finite Γ.  Subsets are
bitmasks over table indices, labellings are tuples; no orbit or grouping helper from
the rest of the package is used.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..caps import DEFAULT_CAPS
from ..errors import UnsupportedModel, check_cap
from ..groups import FiniteGroup, wreath_product
from ..kformula import FormalKGroup
from .facts import class_count, orbit_decomposition_k


def _table(gamma) -> np.ndarray:
    if not isinstance(gamma, FiniteGroup):
        raise UnsupportedModel("oracles need a finite group given by a table")
    return np.asarray(gamma.table, dtype=np.int64)


def _inverse(T: np.ndarray) -> np.ndarray:
    e = int(np.nonzero(np.all(T == np.arange(len(T))[None, :], axis=1))[0][0])
    return np.argmax(T == e, axis=1)


def _translate_mask(T, g, mask) -> int:
    out = 0
    x = 0
    while mask:
        if mask & 1:
            out |= 1 << int(T[g, x])
        mask >>= 1
        x += 1
    return out


def subset_orbit_table(gamma, cap: int = DEFAULT_CAPS.subset_enum) -> dict[int, int]:
    """Map every subset mask to the least mask in its Γ-orbit."""
    T = _table(gamma)
    N = len(T)
    check_cap("subset_enum", 2**N, cap)
    owner: dict[int, int] = {}
    for mask in range(2**N):
        if mask in owner:
            continue
        orbit = {_translate_mask(T, g, mask) for g in range(N)}
        least = min(orbit)
        for y in orbit:
            owner[y] = least
    return owner


def mask_stabilizer(T, mask) -> list[int]:
    return [g for g in range(len(T)) if _translate_mask(T, g, mask) == mask]


def rhs_eq22_literal(n: int, gamma, cap: int = DEFAULT_CAPS.subset_enum) -> FormalKGroup:
    """⊕_{[F] ∈ Γ\\FIN} n^{|F|} · K(Stab_Γ(F)); the empty set contributes K(Γ)."""
    T = _table(gamma)
    owner = subset_orbit_table(gamma, cap)
    total = FormalKGroup()
    for rep in sorted(set(owner.values())):
        size = bin(rep).count("1")
        total = total + FormalKGroup.free(class_count(T, mask_stabilizer(T, rep)), 0).scale(n**size)
    return total


def rhs_eq22_pairs(n: int, gamma, cap: int = DEFAULT_CAPS.point_enum) -> FormalKGroup:
    """⊕ over Γ-orbits of pairs (F, φ: F → {1..n}) of K(Stab_Γ(F, φ))."""
    T = _table(gamma)
    N = len(T)
    inv = _inverse(T)
    check_cap("point_enum", (n + 1) ** N, cap)
    pairs = []
    for mask in range(2**N):
        support = [x for x in range(N) if mask >> x & 1]
        for values in itertools.product(range(1, n + 1), repeat=len(support)):
            pairs.append((mask, values))

    def act(g, pair):
        mask, values = pair
        new_mask = _translate_mask(T, g, mask)
        support = [x for x in range(N) if new_mask >> x & 1]
        old = {x: v for x, v in zip([x for x in range(N) if mask >> x & 1], values)}
        # (gφ)(y) = φ(g⁻¹y)
        return new_mask, tuple(old[int(T[inv[g], y])] for y in support)

    seen = set()
    stabs = []
    for pair in pairs:
        if pair in seen:
            continue
        images = [act(g, pair) for g in range(N)]
        seen.update(images)
        stabs.append([g for g, img in enumerate(images) if img == pair])
    return orbit_decomposition_k(T, stabs)


def point_orbit_k(n: int, gamma, cap: int = DEFAULT_CAPS.point_enum) -> FormalKGroup:
    """K_*(C({0..n}^Γ) ⋊ Γ) by orbit decomposition of the finite shift space."""
    T = _table(gamma)
    N = len(T)
    inv = _inverse(T)
    check_cap("point_enum", (n + 1) ** N, cap)
    base = n + 1
    codes = np.arange(base**N, dtype=np.int64)
    digits = (codes[:, None] // base ** np.arange(N, dtype=np.int64)[None, :]) % base
    weights = base ** np.arange(N, dtype=np.int64)
    # (g·x)(y) = x(g⁻¹y): digit y of the image is digit g⁻¹y of x
    images = np.stack([digits[:, T[inv[g], np.arange(N)]] @ weights for g in range(N)], axis=1)
    least = images.min(axis=1)
    stabs = []
    for rep in np.unique(least):
        stabs.append(np.nonzero(images[rep] == rep)[0].tolist())
    return orbit_decomposition_k(T, stabs)


def wreath_class_count(sigma, gamma, cap: int = DEFAULT_CAPS.group_order) -> int:
    """Conjugacy classes of (⊕_Γ Σ) ⋊ Γ, i.e. the K0 rank of its group algebra."""
    W = wreath_product(sigma, gamma, cap)
    return class_count(np.asarray(W.table, dtype=np.int64), range(W.order))
