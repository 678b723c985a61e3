import ast
from pathlib import Path

import numpy as np
import pytest

import independent as ref
from lamplighter_k.caps import DEFAULT_CAPS
from lamplighter_k.errors import CapExceeded, UnsupportedModel
from lamplighter_k.groups import LatticeGroup, cyclic, dihedral, make_group, symmetric
from lamplighter_k.kformula import FormalKGroup
from lamplighter_k.oracle import (DEFAULT_GRID, ComparisonVerdict, cross_check, point_orbit_k,
                                  rhs_eq22_literal, rhs_eq22_pairs, run_grid, verify_bijection,
                                  wreath_class_count)
from lamplighter_k.oracle.facts import class_count, orbit_decomposition_k
import lamplighter_k.oracle as oracle_pkg


def test_oracle_examples():
    assert rhs_eq22_literal(1, cyclic(3)).ranks() == (8, 0)
    assert rhs_eq22_literal(2, cyclic(2)).ranks() == (12, 0)
    assert rhs_eq22_literal(1, cyclic(1)).ranks() == (2, 0)
    assert rhs_eq22_pairs(2, cyclic(2)).ranks() == (9, 0)
    assert rhs_eq22_pairs(2, cyclic(1)).ranks() == (3, 0)
    assert point_orbit_k(2, cyclic(2)).ranks() == (9, 0)
    assert point_orbit_k(1, cyclic(3)).ranks() == (8, 0)
    assert point_orbit_k(0, symmetric(3)).ranks() == (3, 0)


def test_wreath_class_count_examples():
    assert wreath_class_count(cyclic(2), cyclic(2)) == 5 == ref.wreath_cyclic_classes(2, 2)
    assert wreath_class_count(cyclic(2), cyclic(3)) == 8 == ref.wreath_cyclic_classes(2, 3)
    assert wreath_class_count(cyclic(3), cyclic(2)) == 9 == ref.wreath_cyclic_classes(3, 2)
    assert wreath_class_count(cyclic(4), cyclic(2)) == ref.wreath_cyclic_classes(4, 2)
    with pytest.raises(CapExceeded):
        wreath_class_count(symmetric(3), cyclic(4), cap=1000)


def test_facts():
    G = symmetric(3)
    T = np.asarray(G.table, dtype=np.int64)
    assert class_count(T, range(6)) == 3
    assert class_count(T, [0]) == 1
    D4 = dihedral(4)
    assert class_count(np.asarray(D4.table, dtype=np.int64), range(8)) == 5
    assert orbit_decomposition_k(T, [[0], range(6), [0]]) == FormalKGroup.free(1 + 3 + 1)


def test_oracles_reject_infinite():
    with pytest.raises(UnsupportedModel):
        point_orbit_k(1, LatticeGroup(1))


def test_point_cap():
    with pytest.raises(CapExceeded):
        point_orbit_k(3, make_group("symmetric(3)"), cap=1000)


@pytest.mark.parametrize("s,g", DEFAULT_GRID)
def test_grid_pairs(s, g):
    verdicts = cross_check(make_group(g), sigma=make_group(s))
    assert len(verdicts) == 5
    assert all(v.ok for v in verdicts)
    assert all(v.equal for v in verdicts if v.must_pass)


def test_literal_discrepancy_only_for_m_two():
    for s, g in DEFAULT_GRID:
        last = cross_check(make_group(g), sigma=make_group(s))[-1]
        m = last.context["labels"]
        assert last.equal == (m == 1 or make_group(g).order == 1)


def test_witness_sigma():
    vs = cross_check(cyclic(2), n=2)
    assert vs[3].context["sigma"] == "cyclic(3) (witness)"
    assert vs[3].rhs == {"k0": 9, "k1": 0}
    assert not vs[4].equal and vs[4].ok


# frozen from a Burnside count (tests/independent.py)
@pytest.mark.parametrize("desc,classes", [("cyclic(1)", 1), ("cyclic(2)", 2), ("cyclic(4)", 5),
                                          ("klein", 6), ("symmetric(3)", 15), ("dihedral(4)", 42)])
def test_bijection(desc, classes):
    v = verify_bijection(make_group(desc))
    assert v.equal and v.lhs["classes"] == classes and v.lhs["problems"] == []


def test_bijection_reference_counts():
    groups = [ref.cyclic_group(4), ref.klein_group(), ref.perm_group(3), ref.square_symmetries()]
    assert [ref.nonempty_subset_orbits(g) for g in groups] == [5, 6, 15, 42]


def test_bijection_problems_fail_even_when_counts_match():
    v = ComparisonVerdict("x", "source", {"classes": 3, "problems": ["bad"]},
                          "target", {"classes": 3, "problems": []})
    assert not v.ok


def test_run_grid_small():
    vs = run_grid((("cyclic(2)", "cyclic(2)"),), bijection_max_order=2)
    assert len(vs) == 6 and all(v.ok for v in vs)
    j = vs[0].to_json()
    assert set(j) == {"name", "lhs", "rhs", "equal", "must_pass", "context"}


def test_default_grid_bounded():
    assert len(DEFAULT_GRID) == 14
    for s, g in DEFAULT_GRID:
        S, G = make_group(s), make_group(g)
        assert S.order ** G.order * G.order <= 10_000


FORBIDDEN = {"orbits", "kformula", "findim", "crosscheck"}
ALLOWED_FROM_KFORMULA = {"FormalKGroup"}


@pytest.mark.parametrize("name", ["enumeration.py", "facts.py"])
def test_oracle_independent_of_assembly(name):
    src = Path(oracle_pkg.__file__).parent / name
    tree = ast.parse(src.read_text(encoding="utf-8"))
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            mod = (node.module or "").split(".")[-1]
            if mod == "kformula":
                assert {a.name for a in node.names} <= ALLOWED_FROM_KFORMULA
            elif mod == "groups":
                assert {a.name for a in node.names} <= {"FiniteGroup", "wreath_product"}
            else:
                assert mod not in FORBIDDEN
        elif isinstance(node, ast.Import):
            assert not any(a.name.split(".")[-1] in FORBIDDEN for a in node.names)
