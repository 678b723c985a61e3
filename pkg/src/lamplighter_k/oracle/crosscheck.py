"""Verdicts comparing the assembled formulas with the brute-force oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..caps import DEFAULT_CAPS, Caps
from ..groups import cyclic, finite_subgroup_classes, make_group, normalizer
from ..kformula import FormalKGroup, assemble_literal, assemble_orbit, label_count
from ..orbits import admissible_sets, normalizer_orbits, saturate
from .enumeration import (_table, mask_stabilizer, point_orbit_k, rhs_eq22_literal,
                          rhs_eq22_pairs, subset_orbit_table, wreath_class_count)

SIGMA_GRID = ("cyclic(2)", "cyclic(3)", "symmetric(3)")
GAMMA_GRID = ("cyclic(2)", "cyclic(3)", "cyclic(4)", "klein", "symmetric(3)")
WREATH_CAP = 10_000


def _grid():
    out = []
    for s in SIGMA_GRID:
        for g in GAMMA_GRID:
            S, G = make_group(s), make_group(g)
            if S.order ** G.order * G.order <= WREATH_CAP:
                out.append((s, g))
    return tuple(out)


DEFAULT_GRID = _grid()


@dataclass(frozen=True)
class ComparisonVerdict:
    name: str
    lhs_name: str
    lhs: object
    rhs_name: str
    rhs: object
    context: dict = field(default_factory=dict)
    must_pass: bool = True

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def ok(self) -> bool:
        return self.equal or not self.must_pass

    def to_json(self) -> dict:
        return {"name": self.name,
                "lhs": {"name": self.lhs_name, "value": self.lhs},
                "rhs": {"name": self.rhs_name, "value": self.rhs},
                "equal": self.equal, "must_pass": self.must_pass, "context": self.context}


def _val(k: FormalKGroup) -> dict:
    return {"k0": k.k0.finite_rank, "k1": k.k1.finite_rank}


def verify_bijection(gamma, caps: Caps = DEFAULT_CAPS) -> ComparisonVerdict:
    """[X] ↦ [C·X] from ⊔_[C] N_C\\F(C) to Γ\\FIN° is a bijection, and Stab(C·X) = C."""
    T = _table(gamma)
    owner = subset_orbit_table(gamma, caps.subset_enum)
    targets = sorted({rep for rep in owner.values() if rep})

    def mask(F):
        return sum(1 << x for x in F.elements)

    problems = []
    hit: dict = {}
    n_source = 0
    for cls in finite_subgroup_classes(gamma, caps.group_order):
        C = cls.representative
        N = normalizer(C, gamma)
        sets = admissible_sets(C, gamma, cap=caps.subset_enum)
        for X in sets:
            if mask_stabilizer(T, mask(saturate(C, X))) != list(C.elements):
                problems.append(f"Stab(C·X) != C for C={C.labels()}, X={X.labels()}")
        for orb in normalizer_orbits(C, sets):
            n_source += 1
            X = orb.representative
            image = owner[mask(saturate(C, X))]
            # well-defined: every N_C-translate of X lands in the same Γ-orbit
            for g in N.elements:
                Xg = [X.space.act(g, x) for x in X.members]
                Fg = sum(1 << y for x in Xg for y in X.space.coset(x))
                if owner[Fg] != image:
                    problems.append(f"class of X={X.labels()} not well defined")
                    break
            if image in hit:
                problems.append(f"not injective: {X.labels()} and {hit[image]}")
            hit[image] = X.labels()
    missing = [t for t in targets if t not in hit]
    if missing:
        problems.append(f"not surjective: {len(missing)} orbits missed")
    # problems on the left make the verdict fail even when the counts match
    return ComparisonVerdict("bijection N_C\\F(C) -> Γ\\FIN°",
                             "source", {"classes": n_source, "problems": problems},
                             "target", {"classes": len(targets), "problems": []},
                             {"gamma": gamma.descriptor})


def cross_check(gamma, sigma=None, n: int | None = None, caps: Caps = DEFAULT_CAPS) -> list[ComparisonVerdict]:
    """Five verdicts tying the assembled variants to the oracles.

    With only n given, the wreath comparison uses Σ = cyclic(n+1), which has n+1 classes.
    """
    m = label_count(sigma, n)
    witness = sigma if sigma is not None else cyclic(m + 1)
    ctx = {"gamma": gamma.descriptor, "labels": m,
           "sigma": witness.descriptor + ("" if sigma is not None else " (witness)")}
    kw = {"sigma": sigma} if sigma is not None else {"n": n}
    lit = assemble_literal(gamma, caps=caps, **kw).totals
    orb = assemble_orbit(gamma, caps=caps, **kw).totals
    rhs_lit = rhs_eq22_literal(m, gamma, caps.subset_enum)
    pairs = rhs_eq22_pairs(m, gamma, caps.point_enum)
    points = point_orbit_k(m, gamma, caps.point_enum)
    wreath = FormalKGroup.free(wreath_class_count(witness, gamma, caps.group_order), 0)
    return [
        ComparisonVerdict("literal assembly = subset-orbit oracle", "assemble_literal", _val(lit),
                          "rhs_eq22_literal", _val(rhs_lit), ctx),
        ComparisonVerdict("orbit assembly = cylinder-pair oracle", "assemble_orbit", _val(orb),
                          "rhs_eq22_pairs", _val(pairs), ctx),
        ComparisonVerdict("cylinder pairs = point orbits", "rhs_eq22_pairs", _val(pairs),
                          "point_orbit_k", _val(points), ctx),
        ComparisonVerdict("point orbits = wreath class count", "point_orbit_k", _val(points),
                          "wreath_class_count", _val(wreath), ctx),
        ComparisonVerdict("literal assembly vs point orbits", "assemble_literal", _val(lit),
                          "point_orbit_k", _val(points), ctx, must_pass=False),
    ]


def run_grid(grid=DEFAULT_GRID, caps: Caps = DEFAULT_CAPS, bijection_max_order: int = 8):
    """Verdicts for every (Σ, Γ) pair plus the bijection check for each small Γ."""
    verdicts = []
    gammas = []
    for s, g in grid:
        verdicts.extend(cross_check(make_group(g), sigma=make_group(s), caps=caps))
        if g not in gammas:
            gammas.append(g)
    for g in gammas:
        G = make_group(g)
        if G.order <= bijection_max_order:
            verdicts.append(verify_bijection(G, caps))
    return verdicts
