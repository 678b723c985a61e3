"""Finite subsets of a group and of its coset spaces, under left translation.

Covers stabilizers, canonical orbit representatives, the orbit families of all
(non-empty) finite subsets, the admissible sets F(C), their normalizer orbits,
and the C-action on label functions ``C·X -> {1..m}``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .caps import DEFAULT_CAPS
from .errors import InvariantViolation, UnsupportedModel, check_cap
from .groups import (FreeGroup, GroupModel, LatticeGroup, Subgroup, all_subgroups, ball,
                     coset_space, CosetSpace, normalizer)


@dataclass(frozen=True)
class FiniteSubset:
    group: GroupModel
    elements: tuple

    @classmethod
    def of(cls, G: GroupModel, elements: Iterable) -> "FiniteSubset":
        return cls(G, G.sort(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def translate(self, g) -> "FiniteSubset":
        G = self.group
        return FiniteSubset.of(G, (G.mul(g, x) for x in self.elements))

    def sort_key(self):
        return tuple(self.group.key(x) for x in self.elements)

    def labels(self) -> list[str]:
        return [self.group.label(x) for x in self.elements]

    def __repr__(self):
        return "{" + ", ".join(self.labels()) + "}"


@dataclass(frozen=True)
class CosetSubset:
    space: CosetSpace
    members: tuple

    @classmethod
    def of(cls, space: CosetSpace, reps: Iterable) -> "CosetSubset":
        members = space.parent.sort(space.rep(r) for r in reps)
        if not members:
            raise ValueError("coset subsets are non-empty")
        return cls(space, members)

    def __len__(self):
        return len(self.members)

    def sort_key(self):
        G = self.space.parent
        return (len(self.members), tuple(G.key(x) for x in self.members))

    def labels(self) -> list[str]:
        return [self.space.parent.label(x) for x in self.members]


@dataclass(frozen=True)
class LabelFunction:
    domain: FiniteSubset
    m: int
    values: tuple  # aligned with domain.elements, entries in 1..m

    def __call__(self, x):
        return self.values[self.domain.elements.index(x)]


@dataclass(frozen=True)
class OrbitClass:
    representative: object
    stabilizer: Subgroup
    orbit_size: int | None  # None: orbit inside an infinite ambient group


def stabilizer(F: FiniteSubset) -> Subgroup:
    """{γ : γF = F}; only the translates f·f0⁻¹ can qualify, so at most |F| checks."""
    G = F.group
    if not F.elements:
        return Subgroup.whole(G)
    members = set(F.elements)
    f0_inv = G.inv(F.elements[0])
    stab = []
    for f in F.elements:
        g = G.mul(f, f0_inv)
        if all(G.mul(g, x) in members for x in F.elements):
            stab.append(g)
    return Subgroup(G, stab)


def _canonical_key(G: GroupModel, elements) -> tuple:
    # identity-is-minimal candidates win first; ties broken by sorted element keys
    ident = G.key(G.identity)
    keys = sorted(G.key(x) for x in elements)
    return (sum(1 for k in keys if k < ident), tuple(keys))


def canonical_rep(F: FiniteSubset) -> FiniteSubset:
    """Orbit representative among the translates f⁻¹F, f ∈ F (each contains the identity).

    The chosen translate is the one with fewest elements below the identity in the
    element order, ties broken by the lexicographically smallest sorted element list.
    Any two translates of F give the same candidate family, hence the same result.
    """
    if not F.elements:
        raise ValueError("canonical_rep needs a non-empty subset")
    G = F.group
    best, best_key = None, None
    for f in F.elements:
        fi = G.inv(f)
        cand = [G.mul(fi, x) for x in F.elements]
        key = _canonical_key(G, cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return FiniteSubset.of(G, best)


def _left_perms(G) -> np.ndarray:
    return np.asarray(G.table, dtype=np.int64)


def _mask_translate(perm_row: np.ndarray, mask: int, n: int) -> int:
    out = 0
    for x in range(n):
        if mask >> x & 1:
            out |= 1 << int(perm_row[x])
    return out


def subset_orbits(G: GroupModel, include_empty: bool = True, cap: int = DEFAULT_CAPS.subset_enum) -> list[OrbitClass]:
    """One class per Γ-orbit on finite subsets (non-empty ones only if ``include_empty`` is false)."""
    if not G.is_finite:
        raise UnsupportedModel("subset_orbits enumerates finite groups only")
    n = G.order
    check_cap("subset_enum", 2**n, cap)
    T = _left_perms(G)
    seen = bytearray(2**n)
    out = []
    for mask in range(0 if include_empty else 1, 2**n):
        if seen[mask]:
            continue
        orbit = {_mask_translate(T[g], mask, n) for g in range(n)}
        for o in orbit:
            seen[o] = 1
        F = FiniteSubset.of(G, [x for x in range(n) if mask >> x & 1])
        rep = canonical_rep(F) if F.elements else F
        out.append(OrbitClass(rep, stabilizer(rep), len(orbit)))
    out.sort(key=lambda c: (len(c.representative), c.representative.sort_key()))
    return out


def saturate(C: Subgroup, X: CosetSubset) -> FiniteSubset:
    """C·X as a subset of Γ: the union of the cosets named by X."""
    G = X.space.parent
    return FiniteSubset.of(G, (G.mul(c, x) for x in X.members for c in C.elements))


def _admissible_finite_by_stabilizer(C, space, cap):
    G = space.parent
    reps = space.cosets
    check_cap("subset_enum", 2 ** len(reps), cap)
    target = C.elements
    out = []
    for size in range(1, len(reps) + 1):
        for combo in itertools.combinations(reps, size):
            X = CosetSubset(space, combo)
            if stabilizer(saturate(C, X)).elements == target:
                out.append(X)
    return out


def admissible_sets_by_definition(C: Subgroup, G: GroupModel, cap: int = DEFAULT_CAPS.subset_enum) -> list[CosetSubset]:
    """F(C) from its definition: drop X = π_D⁻¹(π_D(X)) for every finite D ⊋ C."""
    if not G.is_finite:
        raise UnsupportedModel("definition-based F(C) needs a finite group")
    space = coset_space(C, G)
    reps = space.cosets
    check_cap("subset_enum", 2 ** len(reps), cap)
    members = set(C.elements)
    overgroups = [D for D in all_subgroups(G) if D.order > C.order and members <= set(D.elements)]
    projections = [space.projection(D) for D in overgroups]
    out = []
    for size in range(1, len(reps) + 1):
        for combo in itertools.combinations(reps, size):
            chosen = set(combo)
            pulled_back = False
            for pi in projections:
                image = {pi(x) for x in combo}
                if {x for x in reps if pi(x) in image} == chosen:
                    pulled_back = True
                    break
            if not pulled_back:
                out.append(CosetSubset(space, combo))
    return out


def admissible_sets(C: Subgroup, G: GroupModel, bound: tuple[int, int] | None = None,
                    cap: int = DEFAULT_CAPS.subset_enum) -> list[CosetSubset]:
    """All X in F(C), via the criterion Stab_Γ(C·X) = C.

    For finite Γ the definition-based computation runs as well and any disagreement
    raises ``InvariantViolation``.  For infinite Γ only C trivial is supported and
    ``bound = (max_size, radius)`` restricts to X ⊆ ball(radius) with |X| ≤ max_size.
    """
    if G.is_finite:
        space = coset_space(C, G)
        by_stab = _admissible_finite_by_stabilizer(C, space, cap)
        by_def = admissible_sets_by_definition(C, G, cap)
        if [X.members for X in by_stab] != [X.members for X in by_def]:
            raise InvariantViolation(f"F(C) criteria disagree for C={C} in {G.descriptor}")
        return by_stab
    if not C.is_trivial:
        raise UnsupportedModel("F(C) for nontrivial C in an infinite model")
    if bound is None:
        raise ValueError("infinite Γ needs a (max_size, radius) bound")
    k_max, r = bound
    space = coset_space(C, G)
    B = ball(G, r)
    check_cap("subset_enum", sum(math.comb(len(B), k) for k in range(1, k_max + 1)), cap)
    out = []
    for size in range(1, k_max + 1):
        for combo in itertools.combinations(B, size):
            X = CosetSubset(space, combo)
            # torsion-free: every non-empty finite set has trivial stabilizer
            if stabilizer(saturate(C, X)).elements == C.elements:
                out.append(X)
    return out


def normalizer_orbits(C: Subgroup, sets: Sequence[CosetSubset]) -> list[OrbitClass]:
    """N_C-orbits on a family of admissible sets."""
    if not sets:
        return []
    space = sets[0].space
    G = space.parent
    if not G.is_finite:
        if not C.is_trivial:
            raise UnsupportedModel("normalizer orbits for nontrivial C in an infinite model")
        classes = {}
        for X in sets:
            rep = canonical_rep(FiniteSubset.of(G, X.members))
            classes.setdefault(rep.elements, rep)
        out = [OrbitClass(CosetSubset(space, rep.elements), stabilizer(rep), None)
               for rep in classes.values()]
        out.sort(key=lambda c: c.representative.sort_key())
        return out
    N = normalizer(C, G)
    index = {X.members: X for X in sets}
    seen = set()
    out = []
    for X in sorted(sets, key=CosetSubset.sort_key):
        if X.members in seen:
            continue
        orbit = {}
        stab = []
        for g in N.elements:
            image = G.sort(space.act(g, x) for x in X.members)
            orbit[image] = True
            if image == X.members:
                stab.append(g)
        for image in orbit:
            if image not in index:
                raise InvariantViolation("normalizer moved an admissible set outside the family")
            seen.add(image)
        out.append(OrbitClass(X, Subgroup(G, stab), len(orbit)))
    return out


def label_orbits(C: Subgroup, domain: FiniteSubset, m: int, cap: int = DEFAULT_CAPS.label_enum) -> list[OrbitClass]:
    """C-orbits on functions domain -> {1..m} under (c·φ)(f) = φ(c⁻¹f).

    Each class carries Stab_C(φ).  The class count is checked against Burnside's lemma.
    """
    if m < 1:
        raise ValueError("label_orbits needs m >= 1")
    G = domain.group
    k = len(domain)
    check_cap("label_enum", m**k, cap)
    pos = {x: i for i, x in enumerate(domain.elements)}
    perms = []
    for c in C.elements:
        ci = G.inv(c)
        try:
            perms.append((c, tuple(pos[G.mul(ci, x)] for x in domain.elements)))
        except KeyError:
            raise ValueError("C does not preserve the label domain") from None
    seen = set()
    out = []
    for values in itertools.product(range(1, m + 1), repeat=k):
        if values in seen:
            continue
        orbit = set()
        stab = []
        for c, p in perms:
            image = tuple(values[p[i]] for i in range(k))
            orbit.add(image)
            if image == values:
                stab.append(c)
        seen |= orbit
        out.append(OrbitClass(LabelFunction(domain, m, values), Subgroup(G, stab), len(orbit)))
    burnside = sum(m ** _cycle_count(p) for _, p in perms)
    if burnside != len(out) * len(perms):
        raise InvariantViolation(f"label orbit count {len(out)} fails Burnside ({burnside}/{len(perms)})")
    return out


def _cycle_count(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    cycles = 0
    for i in range(len(p)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return cycles


# -- census over torsion-free models ----------------------------------------

def _require_torsion_free(G):
    if not isinstance(G, (LatticeGroup, FreeGroup)):
        raise UnsupportedModel(f"census needs a lattice or free group, got {G.descriptor}")


def census_candidates(G: GroupModel, k_max: int, r: int) -> int:
    """Number of identity-containing candidate subsets the census examines."""
    n = len(ball(G, r)) - 1
    return sum(math.comb(n, k - 1) for k in range(2, k_max + 1))


def census_classes(G: GroupModel, k: int, r: int, cap: int = DEFAULT_CAPS.subset_enum) -> list[FiniteSubset]:
    """Canonical representatives of size k lying in ball(r), listed one by one."""
    _require_torsion_free(G)
    if k < 1:
        return []
    B = ball(G, r)
    others = [x for x in B if x != G.identity]
    check_cap("subset_enum", math.comb(len(others), k - 1), cap)
    out = []
    for combo in itertools.combinations(others, k - 1):
        F = FiniteSubset.of(G, (G.identity,) + combo)
        if canonical_rep(F).elements == F.elements:
            out.append(F)
    return out


def census(G: GroupModel, k_max: int, r: int, cap: int = DEFAULT_CAPS.census) -> dict[int, int]:
    """Per size k ≤ k_max, the number of Γ-orbits of k-subsets whose canonical
    representative lies inside ball(r)."""
    _require_torsion_free(G)
    if k_max < 1 or r < 0:
        return {}
    check_cap("census", census_candidates(G, k_max, r), cap)
    return dict(_census_counts(G.descriptor, _model_factory(G), k_max, r))


def _model_factory(G):
    return (type(G), G.d if isinstance(G, LatticeGroup) else G.k)


@functools.lru_cache(maxsize=32)
def _rank_tables(descriptor, factory, r):
    cls, param = factory
    G = cls(param)
    B = ball(G, r)
    P = G.quotient_codes(B)
    ei = B.index(G.identity)
    return P, ei, int(P[ei, ei])


@functools.lru_cache(maxsize=64)
def _census_counts(descriptor, factory, k_max, r):
    from ._census_kernel import count_canonical

    counts = [(1, 1)]
    if k_max < 2:
        return tuple(counts)
    P, ei, re = _rank_tables(descriptor, factory, r)
    others = np.array([i for i in range(P.shape[0]) if i != ei], dtype=np.int64)
    # prefix pruning is sound when the identity is the least element (free groups)
    prune = bool(P.min() >= re)
    for k in range(2, k_max + 1):
        counts.append((k, int(count_canonical(P, others, ei, re, k, prune))))
    return tuple(counts)
