"""Formal K-groups, the base-K table, and assembly of the lamplighter K-theory formula.

Four assembly variants are provided:

* ``literal``: base + Σ_[C] Σ_[X] m^{|C·X|} · K(C)
* ``orbit``: base + Σ_[C] Σ_[X] Σ_[φ] K(Stab_C(φ)), φ running over C-orbits of labellings
* ``torsionfree``: base + Σ_[X] m^{|X|} · Z for torsion-free Γ
* ``blockcount``: the literal formula with the label count read off a block algebra

Here m is the number of non-trivial labels: |con Σ| - 1, or a block count n given directly.
For infinite Γ the index set is countably infinite; sums run over a finite window and
the remainder is recorded as a flag.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .caps import DEFAULT_CAPS, Caps
from .errors import InvariantViolation, ParseError, UnsupportedModel
from .findim import FinDimAlgebra, validate_algebra
from .groups import (FreeGroup, GroupModel, LatticeGroup, Subgroup, ball, conjugacy_classes,
                     finite_subgroup_classes, is_torsion_free, subgroup_conjugacy_classes)
from .orbits import (FiniteSubset, admissible_sets, census, census_classes, label_orbits,
                     normalizer_orbits, saturate, subset_orbits)

CAVEAT = ("Assumes Γ satisfies the Baum-Connes conjecture with coefficients; "
          "this hypothesis is not checked.")
TABLE_VERSION = "base-k-table/1"
VARIANTS = ("literal", "orbit", "torsionfree", "blockcount")


# -- formal K-groups ----------------------------------------------------------

@dataclass(frozen=True)
class KDegree:
    """One degree of a formal K-group: free rank, a countably-infinite flag, named summands."""

    finite_rank: int = 0
    countably_infinite: bool = False
    symbolic: tuple = ()  # sorted (name, multiplicity) pairs

    def __post_init__(self):
        if self.finite_rank < 0:
            raise ValueError("finite rank must be nonnegative")

    def __add__(self, other: "KDegree") -> "KDegree":
        sym = Counter(dict(self.symbolic))
        sym.update(dict(other.symbolic))
        return KDegree(self.finite_rank + other.finite_rank,
                       self.countably_infinite or other.countably_infinite,
                       tuple(sorted(sym.items())))

    def scale(self, m: int) -> "KDegree":
        if m < 0:
            raise ValueError("multiplicity must be nonnegative")
        if m == 0:
            return KDegree()
        return KDegree(self.finite_rank * m, self.countably_infinite,
                       tuple((name, c * m) for name, c in self.symbolic))

    def to_json(self) -> dict:
        out = {"finite": self.finite_rank, "countably_infinite": self.countably_infinite}
        if self.symbolic:
            out["symbolic"] = dict(self.symbolic)
        return out


@dataclass(frozen=True)
class FormalKGroup:
    k0: KDegree = KDegree()
    k1: KDegree = KDegree()

    @classmethod
    def free(cls, r0: int, r1: int = 0) -> "FormalKGroup":
        return cls(KDegree(r0), KDegree(r1))

    @classmethod
    def symbol(cls, name: str) -> "FormalKGroup":
        return cls(KDegree(symbolic=((f"K0({name})", 1),)), KDegree(symbolic=((f"K1({name})", 1),)))

    def __add__(self, other: "FormalKGroup") -> "FormalKGroup":
        return FormalKGroup(self.k0 + other.k0, self.k1 + other.k1)

    def scale(self, m: int) -> "FormalKGroup":
        return FormalKGroup(self.k0.scale(m), self.k1.scale(m))

    def ranks(self) -> tuple[int, int]:
        return (self.k0.finite_rank, self.k1.finite_rank)

    def to_json(self) -> dict:
        return {"k0": self.k0.to_json(), "k1": self.k1.to_json()}


ZERO = FormalKGroup()


def ksum(items) -> FormalKGroup:
    total = ZERO
    for x in items:
        total = total + x
    return total


# -- base table ---------------------------------------------------------------

@dataclass(frozen=True)
class BaseKTable:
    """K-ranks of C*_λ(G) per model kind, with per-descriptor overrides.

    The lattice and free-group entries are standard results imported from outside;
    the finite-group entry is always computed (number of conjugacy classes).
    """

    kinds: frozenset = frozenset({"finite-table", "integer-lattice", "free"})
    overrides: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        for desc, ranks in self.overrides.items():
            if not (isinstance(ranks, (tuple, list)) and len(ranks) == 2
                    and all(isinstance(r, int) and r >= 0 for r in ranks)):
                raise ParseError(f"table override for {desc!r} must be two nonnegative ints")

    @property
    def version(self) -> str:
        if not self.overrides:
            return TABLE_VERSION
        extra = ",".join(f"{d}={a}/{b}" for d, (a, b) in sorted(self.overrides.items()))
        return f"{TABLE_VERSION}+{extra}"

    def with_overrides(self, overrides: Mapping[str, Sequence[int]]) -> "BaseKTable":
        merged = dict(self.overrides)
        merged.update({k: tuple(v) for k, v in overrides.items()})
        return BaseKTable(self.kinds, merged)

    def lookup(self, G: GroupModel) -> FormalKGroup:
        if G.descriptor in self.overrides and not G.is_finite:
            return FormalKGroup.free(*self.overrides[G.descriptor])
        if G.kind not in self.kinds:
            return FormalKGroup.symbol(f"C*λ({G.descriptor})")
        if G.is_finite:
            return FormalKGroup.free(len(conjugacy_classes(G)), 0)
        if isinstance(G, LatticeGroup):
            r = 2 ** (G.d - 1)
            return FormalKGroup.free(r, r)
        if isinstance(G, FreeGroup):
            return FormalKGroup.free(1, G.k)
        return FormalKGroup.symbol(f"C*λ({G.descriptor})")


DEFAULT_TABLE = BaseKTable()


def base_k(G: GroupModel | Subgroup, table: BaseKTable = DEFAULT_TABLE) -> FormalKGroup:
    """K_*(C*_λ(G)) from the table; finite groups and finite subgroups use class counts."""
    if isinstance(G, Subgroup):
        if G.elements is None:
            return table.lookup(G.parent)
        if "finite-table" not in table.kinds:
            return FormalKGroup.symbol(f"C*λ(order-{G.order} subgroup)")
        return FormalKGroup.free(len(subgroup_conjugacy_classes(G)), 0)
    return table.lookup(G)


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    C: tuple            # labels of the subgroup representative
    X: object           # labels of the coset set, or {"size": k, "classes": count} in aggregate
    phi: tuple | None   # label values on C·X (orbit variant)
    stab_order: int     # order of the group whose K-theory is counted
    k: FormalKGroup

    @property
    def block(self) -> tuple:
        X = self.X if isinstance(self.X, tuple) else tuple(sorted(self.X.items()))
        return (self.C, X)

    def to_json(self) -> dict:
        out = {"C": list(self.C),
               "X": list(self.X) if isinstance(self.X, tuple) else dict(self.X)}
        if self.phi is not None:
            out["phi"] = list(self.phi)
        out["stab_order"] = self.stab_order
        out["k0"] = self.k.k0.finite_rank
        out["k1"] = self.k.k1.finite_rank
        sym = {**dict(self.k.k0.symbolic), **dict(self.k.k1.symbolic)}
        if sym:
            out["symbolic"] = sym
        return out


@dataclass(frozen=True)
class KReport:
    input: dict
    variant: str
    base: FormalKGroup
    summands: tuple
    totals: FormalKGroup
    window: dict | None
    labels: int
    caveat: str = CAVEAT
    table_version: str = TABLE_VERSION

    def recompute_totals(self) -> FormalKGroup:
        total = self.base + ksum(s.k for s in self.summands)
        if self.window is not None and self.window.get("tail_infinite"):
            total = FormalKGroup(KDegree(total.k0.finite_rank, True, total.k0.symbolic), total.k1)
        return total

    def block_totals(self) -> dict:
        """Contribution per ([C], [X]) block, summing over label classes where present."""
        out: dict = {}
        for s in self.summands:
            out[s.block] = out.get(s.block, ZERO) + s.k
        return out

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "input": self.input,
            "labels": self.labels,
            "base": {"k0": self.base.k0.finite_rank, "k1": self.base.k1.finite_rank,
                     **({"symbolic": {**dict(self.base.k0.symbolic), **dict(self.base.k1.symbolic)}}
                        if self.base.k0.symbolic or self.base.k1.symbolic else {})},
            "summands": [s.to_json() for s in self.summands],
            "totals": self.totals.to_json(),
            "window": self.window,
            "caveat": self.caveat,
            "table_version": self.table_version,
        }


# -- assembly -----------------------------------------------------------------

def label_count(sigma: GroupModel | None = None, n: int | None = None) -> int:
    """m = |con Σ| - 1, or n itself."""
    if (sigma is None) == (n is None):
        raise ParseError("give exactly one of sigma or n")
    if sigma is not None:
        if not sigma.is_finite:
            raise UnsupportedModel("Σ must be finite")
        return len(conjugacy_classes(sigma)) - 1
    if not isinstance(n, int) or n < 0:
        raise ParseError(f"n must be a nonnegative integer, got {n!r}")
    return n


def _window(truncation) -> tuple[int, int, bool]:
    if truncation is None:
        raise ParseError("an infinite Γ needs a truncation {max_subset_size, radius}")
    try:
        k = int(truncation["max_subset_size"])
        r = int(truncation["radius"])
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"bad truncation {truncation!r}") from None
    if k < 1 or r < 0:
        raise ParseError("truncation needs max_subset_size >= 1 and radius >= 0")
    return k, r, bool(truncation.get("expand", False))


def _echo(gamma, sigma, n, truncation, m):
    out = {"gamma": gamma.descriptor, "labels": m}
    if sigma is not None:
        out["sigma"] = sigma.descriptor
    if n is not None:
        out["n"] = n
    if truncation is not None and not gamma.is_finite:
        out["truncation"] = {k: truncation[k] for k in sorted(truncation)}
    return out


def _finite_blocks(gamma: GroupModel, caps: Caps):
    """([C], [X], C·X) for every C ∈ 𝒞 and every N_C-orbit on F(C), in report order."""
    for cls in finite_subgroup_classes(gamma, caps.group_order):
        C = cls.representative
        sets = admissible_sets(C, gamma, cap=caps.subset_enum)
        for orb in normalizer_orbits(C, sets):
            X = orb.representative
            yield C, X, saturate(C, X)


def _infinite_window(gamma, m, truncation, caps):
    k_max, r, expand = _window(truncation)
    counts = census(gamma, k_max, r, caps.census)
    if r >= 1:
        smaller = census(gamma, k_max, r - 1, caps.census)
        if any(smaller[k] > counts[k] for k in counts):
            raise InvariantViolation("census is not monotone in the radius")
    window = {"max_subset_size": k_max, "radius": r,
              "census": {str(k): counts[k] for k in sorted(counts)},
              "tail_infinite": m >= 1}
    return counts, window, expand


def _classes_in_window(gamma, k, r, caps):
    return census_classes(gamma, k, r, caps.subset_enum)


def _finish(gamma, sigma, n, truncation, m, variant, summands, window, table):
    base = base_k(gamma, table)
    rep = KReport(_echo(gamma, sigma, n, truncation, m), variant, base, tuple(summands),
                  ZERO, window, m, table_version=table.version)
    rep = KReport(rep.input, variant, base, rep.summands, rep.recompute_totals(), window, m,
                  table_version=table.version)
    return rep


def _require_supported(gamma):
    if not gamma.is_finite and not isinstance(gamma, (LatticeGroup, FreeGroup)):
        raise UnsupportedModel(f"cannot enumerate finite subgroups of {gamma.descriptor}")


def assemble_literal(gamma: GroupModel, *, sigma: GroupModel | None = None, n: int | None = None,
                     truncation: Mapping | None = None, table: BaseKTable = DEFAULT_TABLE,
                     caps: Caps = DEFAULT_CAPS, variant: str = "literal") -> KReport:
    """base_k(Γ) + Σ_[C] Σ_[X] m^{|C·X|} · base_k(C)."""
    m = label_count(sigma, n)
    _require_supported(gamma)
    summands = []
    window = None
    if gamma.is_finite:
        for C, X, CX in _finite_blocks(gamma, caps):
            summands.append(Summand(tuple(C.labels()), tuple(X.labels()), None, C.order,
                                    base_k(C, table).scale(m ** len(CX))))
    else:
        counts, window, expand = _infinite_window(gamma, m, truncation, caps)
        triv = Subgroup.trivial(gamma)
        C_lab = tuple(triv.labels())
        base_c = base_k(triv, table)
        for k in sorted(counts):
            if not counts[k]:
                continue
            if expand:
                for F in _classes_in_window(gamma, k, window["radius"], caps):
                    summands.append(Summand(C_lab, tuple(F.labels()), None, 1, base_c.scale(m ** k)))
            else:
                summands.append(Summand(C_lab, {"size": k, "classes": counts[k]}, None, 1,
                                        base_c.scale(counts[k] * m ** k)))
    return _finish(gamma, sigma, n, truncation, m, variant, summands, window, table)


def _label_domain(gamma, k):
    """Some k-element subset, used as the domain of labellings under the trivial group."""
    r = 0
    while True:
        B = ball(gamma, r)
        if len(B) >= k:
            return FiniteSubset.of(gamma, B[:k])
        r += 1


def assemble_orbit(gamma: GroupModel, *, sigma: GroupModel | None = None, n: int | None = None,
                   truncation: Mapping | None = None, table: BaseKTable = DEFAULT_TABLE,
                   caps: Caps = DEFAULT_CAPS) -> KReport:
    """base_k(Γ) + Σ_[C] Σ_[X] Σ_{[φ] ∈ C\\{1..m}^{C·X}} base_k(Stab_C(φ))."""
    m = label_count(sigma, n)
    _require_supported(gamma)
    summands = []
    window = None
    if gamma.is_finite:
        if m >= 1:
            for C, X, CX in _finite_blocks(gamma, caps):
                for orb in label_orbits(C, CX, m, caps.label_enum):
                    S = orb.stabilizer
                    summands.append(Summand(tuple(C.labels()), tuple(X.labels()),
                                            orb.representative.values, S.order, base_k(S, table)))
    else:
        counts, window, expand = _infinite_window(gamma, m, truncation, caps)
        triv = Subgroup.trivial(gamma)
        C_lab = tuple(triv.labels())
        for k in sorted(counts):
            if not counts[k] or m == 0:
                continue
            if expand:
                for F in _classes_in_window(gamma, k, window["radius"], caps):
                    for orb in label_orbits(triv, F, m, caps.label_enum):
                        summands.append(Summand(C_lab, tuple(F.labels()), orb.representative.values,
                                                orb.stabilizer.order, base_k(orb.stabilizer, table)))
            else:
                for orb in label_orbits(triv, _label_domain(gamma, k), m, caps.label_enum):
                    summands.append(Summand(C_lab, {"size": k, "classes": counts[k]},
                                            orb.representative.values, orb.stabilizer.order,
                                            base_k(orb.stabilizer, table).scale(counts[k])))
    return _finish(gamma, sigma, n, truncation, m, "orbit", summands, window, table)


def assemble_torsionfree(gamma: GroupModel, *, sigma: GroupModel | None = None, n: int | None = None,
                         truncation: Mapping | None = None, table: BaseKTable = DEFAULT_TABLE,
                         caps: Caps = DEFAULT_CAPS) -> KReport:
    """base_k(Γ) + Σ_{[X] ∈ Γ\\FIN°} m^{|X|} · Z, for torsion-free Γ."""
    m = label_count(sigma, n)
    if not is_torsion_free(gamma):
        raise UnsupportedModel(f"{gamma.descriptor} is not torsion-free")
    one = FormalKGroup.free(1, 0)
    summands = []
    window = None
    C_lab = tuple(Subgroup.trivial(gamma).labels())
    if gamma.is_finite:
        for orb in subset_orbits(gamma, include_empty=False, cap=caps.subset_enum):
            X = orb.representative
            summands.append(Summand(C_lab, tuple(X.labels()), None, 1, one.scale(m ** len(X))))
    else:
        counts, window, expand = _infinite_window(gamma, m, truncation, caps)
        for k in sorted(counts):
            if not counts[k]:
                continue
            if expand:
                for F in _classes_in_window(gamma, k, window["radius"], caps):
                    summands.append(Summand(C_lab, tuple(F.labels()), None, 1, one.scale(m ** k)))
            else:
                summands.append(Summand(C_lab, {"size": k, "classes": counts[k]}, None, 1,
                                        one.scale(counts[k] * m ** k)))
    return _finish(gamma, sigma, n, truncation, m, "torsionfree", summands, window, table)


def assemble_blockcount(gamma: GroupModel, algebra: FinDimAlgebra | Sequence[int] | int, *,
                        truncation: Mapping | None = None, table: BaseKTable = DEFAULT_TABLE,
                        caps: Caps = DEFAULT_CAPS) -> KReport:
    """K-theory of (⊗_Γ A) ⋊_r Γ for A = C ⊕ M_k1 ⊕ ... ⊕ M_kn: the literal formula with m = n.

    Only the number of non-trivial blocks matters; the sizes do not enter.
    """
    if isinstance(algebra, int):
        n = algebra
    else:
        A = algebra if isinstance(algebra, FinDimAlgebra) else validate_algebra(algebra)
        n = A.n
    return assemble_literal(gamma, n=n, truncation=truncation, table=table, caps=caps,
                            variant="blockcount")


def assemble(variant: str, gamma: GroupModel, **kw) -> KReport:
    if variant == "literal":
        return assemble_literal(gamma, **kw)
    if variant == "orbit":
        return assemble_orbit(gamma, **kw)
    if variant == "torsionfree":
        return assemble_torsionfree(gamma, **kw)
    if variant == "blockcount":
        n = kw.pop("n", None)
        if kw.pop("sigma", None) is not None or n is None:
            raise ParseError("the blockcount variant takes a block count n")
        return assemble_blockcount(gamma, n, **kw)
    raise ParseError(f"unknown variant {variant!r}; choose from {VARIANTS}")


def k1_corollary_check(report: KReport, table: BaseKTable = DEFAULT_TABLE) -> bool:
    """True iff the degree-1 total equals K1 of the base group: every inner summand
    comes from a finite group and so sits in degree 0."""
    return report.totals.k1 == report.base.k1


def variant_discrepancies(reports: Sequence[KReport]) -> list[dict]:
    """One entry per degree in which the given reports disagree."""
    out = []
    for deg in ("k0", "k1"):
        vals = {r.variant: getattr(r.totals, deg).to_json() for r in reports}
        if len({repr(v) for v in vals.values()}) > 1:
            out.append({"quantity": f"{deg} total", "context": reports[0].input, "values": vals})
    return out
