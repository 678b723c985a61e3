import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import independent as ref
from lamplighter_k.errors import ParseError, UnsupportedModel
from lamplighter_k.groups import FreeGroup, LatticeGroup, Subgroup, cyclic, make_group, symmetric
from lamplighter_k.kformula import (CAVEAT, DEFAULT_TABLE, TABLE_VERSION, ZERO, BaseKTable,
                                    FormalKGroup, KDegree, assemble, assemble_blockcount,
                                    assemble_literal, assemble_orbit, assemble_torsionfree, base_k,
                                    k1_corollary_check, ksum, label_count, variant_discrepancies)

Z = LatticeGroup(1)

degrees = st.builds(KDegree, st.integers(0, 50), st.booleans(),
                    st.lists(st.tuples(st.sampled_from(["a", "b", "c"]), st.integers(1, 3)),
                             unique_by=lambda x: x[0]).map(lambda xs: tuple(sorted(xs))))
kgroups = st.builds(FormalKGroup, degrees, degrees)


@settings(max_examples=100)
@given(kgroups, kgroups, kgroups)
def test_formal_k_group_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + ZERO == a
    assert a.scale(2) == a + a
    assert a.scale(0) == ZERO


def test_formal_k_group_examples():
    assert FormalKGroup.free(2, 1).ranks() == (2, 1)
    s = FormalKGroup.symbol("X") + FormalKGroup.symbol("X")
    assert s.k0.symbolic == (("K0(X)", 2),)
    assert ksum([FormalKGroup.free(1)] * 3) == FormalKGroup.free(3)
    with pytest.raises(ValueError):
        KDegree(-1)
    j = KDegree(3, True).to_json()
    assert j == {"finite": 3, "countably_infinite": True}


def test_base_k_examples():
    assert base_k(symmetric(3)).ranks() == (3, 0)
    assert base_k(Z).ranks() == (1, 1)
    assert base_k(LatticeGroup(3)).ranks() == (4, 4)
    assert base_k(FreeGroup(2)).ranks() == (1, 2)
    assert base_k(Subgroup.trivial(Z)).ranks() == (1, 0)
    narrow = BaseKTable(kinds=frozenset({"finite-table"}))
    sym = base_k(Z, narrow)
    assert sym.ranks() == (0, 0) and sym.k0.symbolic == (("K0(C*λ(lattice(1)))", 1),)
    # frozen from brute-force class sizes
    assert len(ref.class_sizes(ref.perm_group(3))) == 3


def test_table_overrides():
    t = DEFAULT_TABLE.with_overrides({"lattice(1)": [2, 3]})
    assert base_k(Z, t).ranks() == (2, 3)
    assert t.version == TABLE_VERSION + "+lattice(1)=2/3"
    assert DEFAULT_TABLE.version == TABLE_VERSION
    # finite groups are always computed
    assert base_k(cyclic(3), DEFAULT_TABLE.with_overrides({"cyclic(3)": [7, 7]})).ranks() == (3, 0)
    with pytest.raises(ParseError):
        BaseKTable(overrides={"lattice(1)": (1, -1)})


def test_label_count():
    assert label_count(sigma=symmetric(3)) == 2
    assert label_count(n=4) == 4
    with pytest.raises(ParseError):
        label_count(sigma=cyclic(2), n=1)
    with pytest.raises(ParseError):
        label_count()
    with pytest.raises(UnsupportedModel):
        label_count(sigma=Z)


@pytest.mark.parametrize("s,g,lit,orb", [("cyclic(2)", "cyclic(2)", 5, 5), ("cyclic(3)", "cyclic(2)", 12, 9),
                                         ("cyclic(2)", "cyclic(3)", 8, 8)])
def test_assembly_examples(s, g, lit, orb):
    S, G = make_group(s), make_group(g)
    L = assemble_literal(G, sigma=S)
    O = assemble_orbit(G, sigma=S)
    assert L.totals.ranks() == (lit, 0)
    assert O.totals.ranks() == (orb, 0)
    # frozen from brute-force conjugacy classes of the cyclic wreath products
    sg = (S.order, G.order)
    assert ref.wreath_cyclic_classes(*sg) == orb


def test_literal_on_z():
    rep = assemble_literal(Z, sigma=cyclic(2), truncation={"max_subset_size": 3, "radius": 6})
    assert rep.totals.k0.countably_infinite and rep.totals.k1.finite_rank == 1
    assert rep.base.ranks() == (1, 1)
    assert rep.window["census"] == {"1": 1, "2": 6, "3": 15}
    assert rep.totals.k0.finite_rank == 1 + 1 + 6 + 15
    assert rep.caveat == CAVEAT
    with pytest.raises(ParseError):
        assemble_literal(Z, n=1)


def test_torsionfree_examples():
    rep = assemble_torsionfree(Z, n=1, truncation={"max_subset_size": 2, "radius": 5})
    assert [s.k.k0.finite_rank for s in rep.summands] == [1, 5]
    F2 = FreeGroup(2)
    rep = assemble_torsionfree(F2, n=3, truncation={"max_subset_size": 2, "radius": 1})
    assert rep.totals.k1.finite_rank == 2
    assert all(s.k.k1.finite_rank == 0 for s in rep.summands)
    with pytest.raises(UnsupportedModel):
        assemble_torsionfree(cyclic(2), n=1)
    # the trivial group is torsion-free and finite
    assert assemble_torsionfree(cyclic(1), n=2).totals.ranks() == (3, 0)


def test_m_equal_one_agrees():
    for g in ["cyclic(2)", "cyclic(4)", "klein", "symmetric(3)"]:
        G = make_group(g)
        assert assemble_literal(G, n=1).totals == assemble_orbit(G, n=1).totals


def test_m_zero():
    G = symmetric(3)
    assert assemble_literal(G, n=0).totals == base_k(G)
    assert assemble_orbit(G, n=0).totals == base_k(G)


@pytest.mark.parametrize("g", ["cyclic(2)", "cyclic(3)", "cyclic(4)", "klein", "symmetric(3)"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_report_integrity_and_blocks(g, m):
    G = make_group(g)
    L = assemble_literal(G, n=m)
    O = assemble_orbit(G, n=m)
    for rep in (L, O):
        assert rep.recompute_totals() == rep.totals
        assert k1_corollary_check(rep)
    lb, ob = L.block_totals(), O.block_totals()
    assert set(lb) == set(ob)
    for block, k in lb.items():
        C = block[0]
        lo, li = ob[block].k0.finite_rank, k.k0.finite_rank
        assert lo <= li
        assert (lo == li) == (m == 1 or len(C) == 1)


WINDOWS = [("lattice(1)", 3, 4), ("lattice(2)", 3, 2), ("free(2)", 3, 2)]


@pytest.mark.parametrize("desc,k,r", WINDOWS)
@pytest.mark.parametrize("m", [1, 2])
def test_torsionfree_agreement(desc, k, r, m):
    G = make_group(desc)
    for expand in (False, True):
        tr = {"max_subset_size": k, "radius": r, "expand": expand}
        reps = [f(G, n=m, truncation=tr) for f in (assemble_literal, assemble_orbit, assemble_torsionfree)]
        blocks = [{b: v.ranks() for b, v in rep.block_totals().items()} for rep in reps]
        assert blocks[0] == blocks[1] == blocks[2]
        assert len({rep.totals for rep in reps}) == 1
        assert all(k1_corollary_check(rep) and rep.recompute_totals() == rep.totals for rep in reps)
        assert variant_discrepancies(reps) == []


@pytest.mark.parametrize("desc", ["lattice(1)", "lattice(2)", "free(2)"])
def test_window_monotone(desc):
    G = make_group(desc)
    prev = None
    for k in (1, 2, 3):
        for r in (0, 1, 2):
            cur = assemble_literal(G, n=2, truncation={"max_subset_size": k, "radius": r}).totals
            if prev is not None and prev[0] <= k and prev[1] <= r:
                assert cur.k0.finite_rank >= prev[2]
            prev = (k, r, cur.k0.finite_rank)
    a = assemble_literal(G, n=2, truncation={"max_subset_size": 2, "radius": 1}).totals.k0.finite_rank
    b = assemble_literal(G, n=2, truncation={"max_subset_size": 3, "radius": 2}).totals.k0.finite_rank
    assert a <= b


def test_blockcount():
    G = cyclic(2)
    assert assemble_blockcount(G, [2, 1, 3]).totals == assemble_literal(G, n=2).totals
    assert assemble_blockcount(G, 1).variant == "blockcount"
    assert assemble("blockcount", G, n=2).totals.ranks() == (12, 0)
    with pytest.raises(ParseError):
        assemble("blockcount", G, sigma=cyclic(3))
    with pytest.raises(ParseError):
        assemble("nonsense", G, n=1)
    with pytest.raises(UnsupportedModel):
        assemble_blockcount(G, [3])


def test_discrepancies_reported():
    G = cyclic(2)
    d = variant_discrepancies([assemble_literal(G, n=2), assemble_orbit(G, n=2)])
    assert [x["quantity"] for x in d] == ["k0 total"]
    assert d[0]["values"]["literal"]["finite"] == 12 and d[0]["values"]["orbit"]["finite"] == 9


def test_report_json():
    rep = assemble_orbit(cyclic(2), n=2).to_json()
    assert rep["variant"] == "orbit" and rep["totals"]["k0"]["finite"] == 9
    assert all({"C", "X", "phi", "stab_order", "k0", "k1"} <= set(s) for s in rep["summands"])
    agg = assemble_literal(Z, n=1, truncation={"max_subset_size": 2, "radius": 2}).to_json()
    assert agg["summands"][1]["X"] == {"size": 2, "classes": 2}
