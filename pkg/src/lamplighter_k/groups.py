"""Concrete group models: finite multiplication tables, Z^d and free groups.

Elements are plain hashable values: an ``int`` index for finite tables, a tuple of
``d`` integers for lattices, and a tuple of nonzero integers for free-group words
(``+i`` is generator ``i``, ``-i`` its inverse).  Every model exposes ``key`` which
realises its canonical element order.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ParseError, UnsupportedModel, check_cap

DEFAULT_ORDER_CAP = 10_000


class GroupModel:
    kind: str
    descriptor: str
    is_finite: bool
    identity: object

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def key(self, a):
        raise NotImplementedError

    def label(self, a) -> str:
        return str(a)

    @property
    def order(self):
        return None

    def sort(self, elements: Iterable) -> tuple:
        return tuple(sorted(set(elements), key=self.key))

    def conj(self, g, x):
        return self.mul(self.mul(g, x), self.inv(g))

    def quotient_codes(self, elems: Sequence) -> np.ndarray:
        """Integer matrix whose (i, j) entry orders like ``key(elems[i]⁻¹ · elems[j])``.

        Only the relative order of codes is meaningful.  Subclasses override this
        with vectorised encodings; this fallback ranks the products directly.
        """
        prods = [[self.mul(self.inv(f), x) for x in elems] for f in elems]
        distinct = sorted({p for row in prods for p in row}, key=self.key)
        rank = {p: i for i, p in enumerate(distinct)}
        return np.array([[rank[p] for p in row] for row in prods], dtype=np.int64)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class FiniteGroup(GroupModel):
    """Group given by a full multiplication table ``table[a, b] = a*b``."""

    kind = "finite-table"
    is_finite = True

    def __init__(self, table, names: Sequence[str] | None = None, descriptor: str | None = None,
                 check: bool = True):
        table = np.asarray(table)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ParseError("multiplication table must be a non-empty square array")
        if check:
            _validate_table(table)
        dtype = np.int16 if n < 2**15 else np.int32
        self.table = table.astype(dtype, copy=False)
        self.table.setflags(write=False)
        ident = [a for a in range(n) if np.array_equal(self.table[a], np.arange(n))]
        if not ident:
            raise ParseError("multiplication table has no identity element")
        self.identity = ident[0]
        self.inverse = np.argmax(self.table == self.identity, axis=1).astype(dtype)
        self.inverse.setflags(write=False)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise ParseError("element names do not match the table size")
        self.descriptor = descriptor or f"table({n})"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def key(self, a):
        return a

    def label(self, a) -> str:
        return self.names[a]


def _validate_table(table: np.ndarray):
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise ParseError("table entries out of range")
    full = np.arange(n)
    for row in table:
        if not np.array_equal(np.sort(row), full):
            raise ParseError("multiplication table is not a Latin square")
    for col in table.T:
        if not np.array_equal(np.sort(col), full):
            raise ParseError("multiplication table is not a Latin square")
    # associativity: exhaustive on small tables, seeded sample otherwise
    if n <= 48:
        left = table[table[:, :, None], np.arange(n)[None, None, :]]
        right = table[np.arange(n)[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            raise ParseError("multiplication table is not associative")
    else:
        rng = random.Random(0)
        for _ in range(4000):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if table[table[a, b], c] != table[a, table[b, c]]:
                raise ParseError("multiplication table is not associative")


class LatticeGroup(GroupModel):
    kind = "integer-lattice"
    is_finite = False

    def __init__(self, d: int):
        if d < 1:
            raise ParseError("lattice dimension must be >= 1")
        self.d = d
        self.identity = (0,) * d
        self.descriptor = f"lattice({d})"

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def key(self, a):
        return a

    def label(self, a) -> str:
        return str(a[0]) if self.d == 1 else "(" + ",".join(map(str, a)) + ")"

    def quotient_codes(self, elems):
        V = np.array(elems, dtype=np.int64).reshape(len(elems), self.d)
        diff = V[None, :, :] - V[:, None, :]
        lo = diff.min(initial=0)
        base = diff.max(initial=0) - lo + 1
        weights = base ** np.arange(self.d - 1, -1, -1, dtype=np.int64)
        return (diff - lo) @ weights


class FreeGroup(GroupModel):
    """Free group on ``k`` generators; shortlex order with a1 < a1^-1 < a2 < ..."""

    kind = "free"
    is_finite = False

    def __init__(self, k: int):
        if k < 1:
            raise ParseError("free group rank must be >= 1")
        self.k = k
        self.identity = ()
        self.descriptor = f"free({k})"

    def mul(self, a, b):
        w = list(a)
        for x in b:
            if w and w[-1] == -x:
                w.pop()
            else:
                w.append(x)
        return tuple(w)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def key(self, a):
        return (len(a), tuple((abs(x), x < 0) for x in a))

    def label(self, a) -> str:
        if not a:
            return "e"
        letters = "abcdefghijklmnopqrstuvwxyz"
        out = []
        for x in a:
            ch = letters[abs(x) - 1] if abs(x) <= 26 else f"g{abs(x)}"
            out.append(ch if x > 0 else ch.upper() if abs(x) <= 26 else ch + "^-1")
        return "".join(out)

    def quotient_codes(self, elems):
        # f⁻¹x cancels the common prefix c of f and x: inv(f[c:]) followed by x[c:].
        # Shortlex = length first, then the word read as a base-2k numeral with
        # letter digits a1=0, a1⁻¹=1, a2=2, ...
        base = 2 * self.k
        n = len(elems)
        L = max((len(w) for w in elems), default=0)
        lens = np.array([len(w) for w in elems], dtype=np.int64)
        W = np.zeros((n, max(L, 1)), dtype=np.int64)
        for i, w in enumerate(elems):
            W[i, :len(w)] = w
        digit = np.where(W > 0, 2 * (W - 1), 2 * (-W - 1) + 1)
        inv_digit = np.where(W > 0, 2 * (W - 1) + 1, 2 * (-W - 1))
        # suffix_val[i, c]: value of elems[i][c:]; inv_val[i, c]: value of inv(elems[i][c:])
        suffix_val = np.zeros((n, L + 1), dtype=np.int64)
        inv_val = np.zeros((n, L + 1), dtype=np.int64)
        for c in range(L - 1, -1, -1):
            live = c < lens
            tail = lens - c - 1
            suffix_val[:, c] = np.where(live, digit[:, c] * base ** np.maximum(tail, 0) + suffix_val[:, c + 1], 0)
            inv_val[:, c] = np.where(live, inv_val[:, c + 1] * base + inv_digit[:, c], 0)
        same = (W[:, None, :] == W[None, :, :])
        lcp = np.cumprod(same, axis=2).sum(axis=2)
        lcp = np.minimum(lcp, np.minimum(lens[:, None], lens[None, :]))
        rows = np.arange(n)[:, None]
        cols = np.arange(n)[None, :]
        left_len = lens[:, None] - lcp
        right_len = lens[None, :] - lcp
        length = left_len + right_len
        value = inv_val[rows, lcp] * base ** right_len + suffix_val[cols, lcp]
        offsets = np.cumsum(base ** np.arange(2 * L + 1, dtype=np.int64)) - 1
        offsets = np.concatenate([[0], offsets[:-1] + 1]) if L else np.array([0, 1])
        return offsets[length] + value

    def word(self, text: str) -> tuple:
        """Parse ``'aB'`` style words (capital letter = inverse) into reduced form."""
        letters = "abcdefghijklmnopqrstuvwxyz"
        w = ()
        for ch in text:
            if ch == "e":
                continue
            i = letters.index(ch.lower()) + 1
            if i > self.k:
                raise ParseError(f"generator {ch!r} not in free({self.k})")
            w = self.mul(w, (i if ch.islower() else -i,))
        return w


# -- constructors -----------------------------------------------------------

def cyclic(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParseError("cyclic(n) needs n >= 1")
    check_cap("group_order", n, cap)
    table = np.add.outer(np.arange(n), np.arange(n)) % n
    return FiniteGroup(table, [str(i) for i in range(n)], f"cyclic({n})", check=False)


def symmetric(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParseError("symmetric(n) needs n >= 1")
    check_cap("group_order", math.factorial(n), cap)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = perms @ weights
    table = np.empty((len(perms), len(perms)), dtype=np.int64)
    for a, p in enumerate(perms):
        # (p*q)(i) = p(q(i))
        table[a] = np.searchsorted(codes, p[perms] @ weights)
    names = ["".join(str(i + 1) for i in p) for p in perms]
    return FiniteGroup(table, names, f"symmetric({n})", check=False)


def dihedral(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n; index j*n + i stands for r^i s^j."""
    if n < 1:
        raise ParseError("dihedral(n) needs n >= 1")
    check_cap("group_order", 2 * n, cap)
    idx = np.arange(2 * n)
    i, j = idx % n, idx // n
    sign = np.where(j == 1, -1, 1)
    table = ((i[:, None] + sign[:, None] * i[None, :]) % n) + n * (j[:, None] ^ j[None, :])
    names = []
    for jj in range(2):
        for ii in range(n):
            s = ("r" if ii == 1 else f"r{ii}" if ii else "") + ("s" if jj else "")
            names.append(s or "e")
    return FiniteGroup(table, names, f"dihedral({n})", check=False)


def direct_product(*factors: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if not factors:
        raise ParseError("product() needs at least one factor")
    check_cap("group_order", math.prod(G.order for G in factors), cap)
    table = factors[0].table.astype(np.int64)
    names = list(factors[0].names)
    for H in factors[1:]:
        nG, nH = table.shape[0], H.order
        TH = H.table.astype(np.int64)
        table = (table[:, None, :, None] * nH + TH[None, :, None, :]).reshape(nG * nH, nG * nH)
        names = [f"{g},{h}" for g in names for h in H.names]
    names = [f"({x})" for x in names] if len(factors) > 1 else names
    desc = "product(" + ",".join(G.descriptor for G in factors) + ")"
    return FiniteGroup(table, names, desc, check=False)


def wreath_product(sigma: FiniteGroup, gamma: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The group (⊕_Γ Σ) ⋊ Γ of pairs (f, γ) with (f,γ)(g,δ) = (f·(γ▹g), γδ).

    ``(γ▹g)(x) = g(γ⁻¹x)``.  Element (f, γ) sits at index ``code(f)*|Γ| + γ`` where
    ``code`` reads f as a base-|Σ| numeral, so the table order is lexicographic in (f, γ).
    """
    if not (sigma.is_finite and gamma.is_finite):
        raise UnsupportedModel("wreath_product needs finite Σ and Γ")
    s, g = sigma.order, gamma.order
    order = s**g * g
    check_cap("group_order", order, cap)
    nf = s**g
    funcs = np.array(list(itertools.product(range(s), repeat=g)), dtype=np.int64).reshape(nf, g)
    weights = s ** np.arange(g - 1, -1, -1, dtype=np.int64)
    TS = sigma.table.astype(np.int64)
    TG = gamma.table.astype(np.int64)
    dtype = np.int16 if order < 2**15 else np.int32
    table = np.empty((nf, g, nf, g), dtype=dtype)
    for c in range(g):
        perm = TG[gamma.inv(c)]  # x -> c^{-1} x
        shifted = funcs[:, perm]
        codes = TS[funcs[:, None, :], shifted[None, :, :]] @ weights
        for d in range(g):
            table[:, c, :, d] = codes * g + TG[c, d]
    names = ["([" + ",".join(sigma.names[v] for v in f) + "]," + gamma.names[c] + ")"
             for f in funcs for c in range(g)]
    return FiniteGroup(table.reshape(order, order), names,
                       f"wreath({sigma.descriptor},{gamma.descriptor})", check=False)


# -- descriptor parsing -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name.lower()))
        elif sym.strip():
            out.append(("sym", sym))
        pos = m.end()
    return out


def make_group(spec, cap: int = DEFAULT_ORDER_CAP) -> GroupModel:
    """Build a validated group from a descriptor.

    ``spec`` is a string such as ``"cyclic(3)"``, ``"symmetric(3)"``, ``"dihedral(4)"``,
    ``"klein"``, ``"product(cyclic(2),cyclic(3))"``, ``"wreath(cyclic(2),cyclic(2))"``,
    ``"lattice(2)"`` or ``"free(2)"``; or a mapping ``{"table": [[...]], "names": [...]}``.
    """
    if isinstance(spec, GroupModel):
        return spec
    if isinstance(spec, dict):
        if "table" not in spec:
            raise ParseError("explicit group needs a 'table' entry")
        try:
            table = np.array(spec["table"], dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad multiplication table: {exc}") from None
        if table.ndim != 2:
            raise ParseError("multiplication table must be two-dimensional")
        check_cap("group_order", table.shape[0], cap)
        return FiniteGroup(table, spec.get("names"), spec.get("descriptor"))
    if not isinstance(spec, str):
        raise ParseError(f"cannot parse group descriptor {spec!r}")
    tokens = _tokenize(spec)
    if not tokens:
        raise ParseError("empty group descriptor")
    group, pos = _parse(tokens, 0, cap, spec)
    if pos != len(tokens):
        raise ParseError(f"trailing input in group descriptor {spec!r}")
    return group


def _parse(tokens, pos, cap, text):
    def expect(kind, value=None):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] != kind or (value is not None and tokens[pos][1] != value):
            raise ParseError(f"malformed group descriptor {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok[1]

    name = expect("name")
    if name in ("klein", "v4"):
        return direct_product(cyclic(2), cyclic(2), cap=cap), pos
    if name == "z":
        return LatticeGroup(1), pos
    expect("sym", "(")
    if name in ("cyclic", "symmetric", "dihedral", "lattice", "free"):
        arg = expect("int")
        expect("sym", ")")
        ctor = {"cyclic": lambda: cyclic(arg, cap), "symmetric": lambda: symmetric(arg, cap),
                "dihedral": lambda: dihedral(arg, cap), "lattice": lambda: LatticeGroup(arg),
                "free": lambda: FreeGroup(arg)}[name]
        return ctor(), pos
    if name in ("product", "wreath"):
        args = []
        while True:
            sub, pos = _parse(tokens, pos, cap, text)
            if not sub.is_finite:
                raise UnsupportedModel(f"{name}() is only supported for finite factors")
            args.append(sub)
            if pos < len(tokens) and tokens[pos] == ("sym", ","):
                pos += 1
                continue
            break
        expect("sym", ")")
        if name == "wreath":
            if len(args) != 2:
                raise ParseError("wreath() takes exactly two groups")
            return wreath_product(args[0], args[1], cap=cap), pos
        return direct_product(*args, cap=cap), pos
    raise ParseError(f"unknown group constructor {name!r}")


# -- structure --------------------------------------------------------------

class Subgroup:
    """A subgroup of ``parent``; ``elements`` is None only for an infinite whole group."""

    def __init__(self, parent: GroupModel, elements: Iterable | None):
        self.parent = parent
        self.elements = None if elements is None else parent.sort(elements)

    @classmethod
    def whole(cls, G: GroupModel) -> "Subgroup":
        return cls(G, G.elements() if G.is_finite else None)

    @classmethod
    def trivial(cls, G: GroupModel) -> "Subgroup":
        return cls(G, [G.identity])

    @property
    def order(self):
        return None if self.elements is None else len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.elements is not None and len(self.elements) == 1

    @property
    def is_whole(self) -> bool:
        if self.elements is None:
            return True
        return self.parent.is_finite and len(self.elements) == self.parent.order

    def __contains__(self, x) -> bool:
        return True if self.elements is None else x in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = self.__dict__["_cached_set"] = frozenset(self.elements)
        return s

    def sort_key(self):
        return (len(self.elements), tuple(self.parent.key(x) for x in self.elements))

    def labels(self) -> list[str]:
        if self.elements is None:
            return ["<whole group>"]
        return [self.parent.label(x) for x in self.elements]

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.elements == other.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self):
        if self.elements is None:
            return f"Subgroup({self.parent.descriptor}, whole)"
        return f"Subgroup({self.parent.descriptor}, {{{', '.join(self.labels())}}})"


@dataclass(frozen=True)
class ConjClassSet:
    classes: tuple[tuple, ...]

    @property
    def nontrivial(self) -> tuple[tuple, ...]:
        return self.classes[1:]

    def __len__(self):
        return len(self.classes)


def _require_finite(G: GroupModel, what: str):
    if not G.is_finite:
        raise UnsupportedModel(f"{what} needs a finite group, got {G.descriptor}")


def conjugacy_classes(G: GroupModel) -> ConjClassSet:
    _require_finite(G, "conjugacy_classes")
    return _classes_within(G, np.arange(G.order))


def subgroup_conjugacy_classes(H: Subgroup) -> ConjClassSet:
    """Conjugacy classes of H itself (conjugation by elements of H only)."""
    if H.elements is None:
        raise UnsupportedModel("conjugacy classes of an infinite subgroup")
    G = H.parent
    if not G.is_finite:
        if H.is_trivial:
            return ConjClassSet(((G.identity,),))
        raise UnsupportedModel("nontrivial finite subgroups of infinite models")
    return _classes_within(G, np.array(H.elements, dtype=np.int64))


def _classes_within(G: FiniteGroup, members: np.ndarray) -> ConjClassSet:
    T = G.table
    inv = G.inverse[members]
    assigned = np.zeros(G.order, dtype=bool)
    classes = []
    for x in members:
        if assigned[x]:
            continue
        cls = np.unique(T[T[members, x], inv])
        assigned[cls] = True
        classes.append(tuple(int(c) for c in cls))
    return _order_classes(G, classes)


def _order_classes(G: GroupModel, classes) -> ConjClassSet:
    ident = [c for c in classes if G.identity in c]
    rest = sorted((c for c in classes if G.identity not in c), key=lambda c: G.key(c[0]))
    return ConjClassSet(tuple(ident + rest))


def closure(G: FiniteGroup, generators: Iterable[int]) -> frozenset:
    """Subgroup generated by ``generators`` (closure under products suffices in a finite group)."""
    gens = list(dict.fromkeys(int(g) for g in generators))
    elems = {G.identity}
    frontier = [G.identity]
    T = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(T[x, g])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def all_subgroups(G: GroupModel, cap: int = DEFAULT_ORDER_CAP) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (order, element list).

    Joins of cyclic subgroups: every subgroup of a finite group is such a join.
    """
    _require_finite(G, "all_subgroups")
    check_cap("group_order", G.order, cap)
    cyclics = list(dict.fromkeys(closure(G, [g]) for g in G.elements()))
    found = set(cyclics)
    frontier = list(cyclics)
    n = G.order
    while frontier:
        nxt = []
        for H in frontier:
            if len(H) == n:
                continue
            for Z in cyclics:
                if Z <= H:
                    continue
                J = closure(G, H | Z)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    subs = [Subgroup(G, H) for H in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


@dataclass(frozen=True)
class SubgroupClass:
    representative: Subgroup
    size: int  # number of conjugate subgroups


def finite_subgroup_classes(G: GroupModel, cap: int = DEFAULT_ORDER_CAP) -> list[SubgroupClass]:
    if not G.is_finite:
        if isinstance(G, (LatticeGroup, FreeGroup)):
            return [SubgroupClass(Subgroup.trivial(G), 1)]
        raise UnsupportedModel(f"finite subgroups of {G.descriptor} are not classified")
    subs = all_subgroups(G, cap)
    index = {H.elements: i for i, H in enumerate(subs)}
    owner = [None] * len(subs)
    out = []
    T, inv = G.table, G.inverse
    for i, H in enumerate(subs):
        if owner[i] is not None:
            continue
        members = np.array(H.elements, dtype=np.int64)
        conj = set()
        for g in G.elements():
            image = tuple(sorted(int(x) for x in T[T[g, members], inv[g]]))
            conj.add(image)
        for image in conj:
            owner[index[image]] = i
        out.append(SubgroupClass(H, len(conj)))
    return out


def normalizer(C: Subgroup, G: GroupModel | None = None) -> Subgroup:
    G = G or C.parent
    if C.is_trivial:
        return Subgroup.whole(G)
    if not G.is_finite:
        raise UnsupportedModel("normalizer of a nontrivial subgroup of an infinite model")
    members = set(C.elements)
    return Subgroup(G, [g for g in G.elements() if {G.conj(g, c) for c in members} == members])


class CosetSpace:
    """Right cosets C\\Γ, each named by its minimal element."""

    def __init__(self, C: Subgroup, G: GroupModel):
        if C.parent is not G:
            raise UnsupportedModel("subgroup belongs to a different group")
        self.subgroup = C
        self.parent = G
        if G.is_finite:
            rep = {}
            for x in G.elements():
                if x in rep:
                    continue
                coset = [G.mul(c, x) for c in C.elements]
                r = min(coset, key=G.key)
                for y in coset:
                    rep[y] = r
            self._rep = rep
            self.cosets = G.sort(set(rep.values()))
        else:
            if not C.is_trivial:
                raise UnsupportedModel("coset spaces of nontrivial subgroups of infinite models")
            self._rep = None
            self.cosets = None  # Γ itself, resolved lazily

    def rep(self, x):
        return x if self._rep is None else self._rep[x]

    def __len__(self):
        if self.cosets is None:
            raise UnsupportedModel("infinite coset space has no length")
        return len(self.cosets)

    def coset(self, r) -> tuple:
        G = self.parent
        return G.sort(G.mul(c, r) for c in self.subgroup.elements)

    def projection(self, D: Subgroup) -> Callable:
        """π: C\\Γ → D\\Γ for D ⊇ C, on coset representatives."""
        if not all(c in D for c in self.subgroup.elements):
            raise UnsupportedModel("projection target must contain the subgroup")
        target = coset_space(D, self.parent)
        return target.rep

    def act(self, g, r):
        """Left multiplication n·(Cr) = C(nr), valid for n in the normalizer."""
        return self.rep(self.parent.mul(g, r))


def coset_space(C: Subgroup, G: GroupModel | None = None) -> CosetSpace:
    return CosetSpace(C, G or C.parent)


def ball(G: GroupModel, r: int) -> list:
    """All elements of word length (free) or max-norm (lattice) at most r, sorted."""
    if r < 0:
        raise ParseError("radius must be nonnegative")
    if isinstance(G, LatticeGroup):
        return list(itertools.product(range(-r, r + 1), repeat=G.d))
    if isinstance(G, FreeGroup):
        words = [()]
        layer = [()]
        letters = [s * i for i in range(1, G.k + 1) for s in (1, -1)]
        for _ in range(r):
            layer = [w + (x,) for w in layer for x in letters if not (w and w[-1] == -x)]
            words.extend(layer)
        return sorted(words, key=G.key)
    raise UnsupportedModel(f"ball() needs a lattice or free group, got {G.descriptor}")


def is_torsion_free(G: GroupModel) -> bool:
    return isinstance(G, (LatticeGroup, FreeGroup)) or (G.is_finite and G.order == 1)


__all__ = [
    "GroupModel", "FiniteGroup", "LatticeGroup", "FreeGroup", "Subgroup", "ConjClassSet",
    "CosetSpace", "SubgroupClass", "make_group", "cyclic", "symmetric", "dihedral",
    "direct_product", "wreath_product", "conjugacy_classes", "subgroup_conjugacy_classes",
    "all_subgroups", "finite_subgroup_classes", "normalizer", "coset_space", "ball",
    "closure", "is_torsion_free", "CapExceeded",
]
