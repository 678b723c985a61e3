"""Plain-Python reference computations, sharing no code with the package.

Used to (re)derive the frozen expected values in the test suite.
"""

from __future__ import annotations

import itertools
import math


def perm_group(n):
    elems = list(itertools.permutations(range(n)))

    def mul(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(n))

    def inv(p):
        out = [0] * n
        for i, x in enumerate(p):
            out[x] = i
        return tuple(out)

    return elems, mul, inv


def cyclic_group(n):
    return list(range(n)), (lambda a, b: (a + b) % n), (lambda a: (-a) % n)


def square_symmetries():
    """Dihedral group of order 8 as permutations of the square's vertices."""
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    _, mul, inv = perm_group(4)
    elems = {tuple(range(4))}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in (r, s):
                y = mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elems), mul, inv


def class_sizes(group):
    elems, mul, inv = group
    seen = set()
    sizes = []
    for x in elems:
        if x in seen:
            continue
        cls = {mul(mul(g, x), inv(g)) for g in elems}
        seen |= cls
        sizes.append(len(cls))
    return sizes


def subgroups(group):
    """All subgroups by closing every subset (small groups only)."""
    elems, mul, inv = group
    found = set()
    for r in range(len(elems) + 1):
        for gens in itertools.combinations(elems, r):
            H = {elems[0]} | set(gens)
            # elems[0] is the identity for every group built here
            changed = True
            while changed:
                changed = False
                for a in list(H):
                    for b in list(H):
                        c = mul(a, b)
                        if c not in H:
                            H.add(c)
                            changed = True
            found.add(frozenset(H))
    return found


def wreath_cyclic_classes(s, g):
    """Conjugacy classes of C_s ≀ C_g from the definition (f, γ)(h, δ) = (f + γ▹h, γ + δ)."""
    elems = [(f, c) for f in itertools.product(range(s), repeat=g) for c in range(g)]

    def shift(c, h):  # (c▹h)(x) = h(x - c)
        return tuple(h[(x - c) % g] for x in range(g))

    def mul(a, b):
        f, c = a
        h, d = b
        return (tuple((x + y) % s for x, y in zip(f, shift(c, h))), (c + d) % g)

    ident = ((0,) * g, 0)
    inverse = {a: next(b for b in elems if mul(a, b) == ident) for a in elems}
    return len(class_sizes((elems, mul, lambda a: inverse[a])))


def z_census(k, d):
    """Translation classes of k-subsets of Z with diameter ≤ d, by listing {0 < ... < top}."""
    if k == 1:
        return 1
    return sum(1 for top in range(1, d + 1) for _ in itertools.combinations(range(1, top), k - 2))


def z_census_closed_form(k, d):
    return 1 if k == 1 else sum(math.comb(j - 1, k - 2) for j in range(1, d + 1))


def free_ball_size(k, r):
    return 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2)


def label_orbit_count(perms, m, size):
    """Orbits of {1..m}^size under a list of index permutations, by listing."""
    seen = set()
    count = 0
    for values in itertools.product(range(1, m + 1), repeat=size):
        if values in seen:
            continue
        count += 1
        for p in perms:
            seen.add(tuple(values[p[i]] for i in range(size)))
    return count


def kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def nonempty_subset_orbits(group):
    """Burnside count of left-translation orbits on non-empty subsets."""
    elems, mul, _ = group
    total = 0
    for g in elems:
        seen, cycles = set(), 0
        for x in elems:
            if x in seen:
                continue
            cycles += 1
            y = x
            while y not in seen:
                seen.add(y)
                y = mul(g, y)
        total += 2**cycles
    return total // len(elems) - 1


def klein_group():
    elems = [(a, b) for a in range(2) for b in range(2)]
    return elems, (lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)), (lambda x: x)
