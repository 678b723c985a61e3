import itertools
from fractions import Fraction

import numpy as np
import pytest

import independent as ref
from lamplighter_k.errors import CapExceeded, InvariantViolation, UnsupportedModel
from lamplighter_k.findim import (BlockElement, FinDimAlgebra, algebra_from_group, e_phi,
                                  label_functions, m_matrix, m_tensor, minimal_projections,
                                  rank_map, rank_vector, smith_normal_form, unit, validate_algebra,
                                  verify_family, verify_function_algebra_iso, verify_k0_diagram)
from lamplighter_k.groups import LatticeGroup, make_group
from lamplighter_k.intmatrix import IntMatrix, kron_power

SMALL = [(1,), (1, 1), (1, 2), (1, 2, 3), (1, 1, 1), (1, 3, 1, 2)]


def test_validate_algebra():
    with pytest.raises(UnsupportedModel):
        validate_algebra([2])
    assert validate_algebra([2, 1, 3]).block_sizes == (1, 2, 3)
    assert validate_algebra([1]).block_sizes == (1,)
    with pytest.raises(ValueError):
        validate_algebra([1, 0])
    with pytest.raises(ValueError):
        FinDimAlgebra((2, 1))


def test_algebra_from_group():
    assert algebra_from_group(make_group("cyclic(2)")).n == 1
    assert algebra_from_group(make_group("cyclic(3)")).n == 2
    A = algebra_from_group(make_group("symmetric(3)"))
    assert A.n == 2 and A.symbolic and A.block_sizes[0] == 1
    with pytest.raises(ValueError):
        A.sizes
    with pytest.raises(UnsupportedModel):
        algebra_from_group(LatticeGroup(1))


def test_minimal_projections():
    (only,) = minimal_projections(FinDimAlgebra((1,)))
    assert only == unit(FinDimAlgebra((1,)))
    A = FinDimAlgebra((1, 2))
    e = minimal_projections(A)
    assert rank_vector(e[1]) == [0, 1]
    for A in map(FinDimAlgebra, SMALL):
        for i, p in enumerate(minimal_projections(A)):
            assert rank_vector(p) == [int(i == j) for j in range(A.n + 1)]


def test_rank_vector_examples():
    A = FinDimAlgebra((1, 2))
    assert rank_vector(unit(A)) == [1, 2]
    assert rank_vector(unit(A, 2)) == [1, 2, 2, 4]
    with pytest.raises(InvariantViolation):
        rank_vector(unit(A) + unit(A))


def test_rank_vector_additive_and_conjugation_invariant():
    A = FinDimAlgebra((1, 3))
    e = minimal_projections(A)
    # two orthogonal rank-one projections in the 3x3 block
    p = BlockElement(A, 1, {(1,): np.diag([1, 0, 0])})
    q = BlockElement(A, 1, {(1,): np.diag([0, 1, 0])})
    assert (p @ q).is_zero()
    assert rank_vector(p + q) == [a + b for a, b in zip(rank_vector(p), rank_vector(q))]
    assert p == e[1]
    # signed permutation unitary
    u = BlockElement(A, 1, {(0,): np.array([[1]]), (1,): np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]])})
    moved = u @ (p + q) @ u.adjoint()
    assert rank_vector(moved) == rank_vector(p + q)
    # rational rotation, exact via Fractions
    c, s = Fraction(3, 5), Fraction(4, 5)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=object)
    w = BlockElement(A, 1, {(0,): np.array([[1]], dtype=object), (1,): R})
    rot = w @ p @ w.adjoint()
    assert not rot.is_diagonal()
    assert rank_vector(rot) == [0, 1]
    zero = BlockElement(A, 1, {})
    assert rank_vector(zero) == [0, 0]


def test_e_phi_examples():
    A = FinDimAlgebra((1, 1))
    assert e_phi(A, [], {}) == unit(A, 0)
    p = e_phi(A, ["f", "g"], {"f": 1, "g": 1})
    assert sum(rank_vector(p)) == 1
    assert p.diagonal().tolist() == [0, 0, 0, 1]
    for sizes in SMALL:
        A = FinDimAlgebra(sizes)
        for phi in label_functions(A.n, [0, 1]):
            assert not e_phi(A, [0, 1], phi).is_zero()
    with pytest.raises(CapExceeded):
        e_phi(FinDimAlgebra((1, 4, 4, 4)), range(4), {}, cap=4096)
    with pytest.raises(ValueError):
        e_phi(A, [0], {1: 1})


def test_e_phi_products():
    A = FinDimAlgebra((1, 2, 2))
    F = [0, 1]
    phis = label_functions(A.n, F)
    for phi, psi in itertools.product(phis, repeat=2):
        prod = e_phi(A, F, phi) @ e_phi(A, F, psi)
        clash = any(phi[f] != psi[f] for f in set(phi) & set(psi))
        if clash:
            assert prod.is_zero()
        else:
            assert prod == e_phi(A, F, {**phi, **psi})


def test_verify_family_examples():
    r = verify_family(FinDimAlgebra((1, 1)), 2)
    assert r["family_size"] == 4 and r["rank"] == 4 and r["ok"]
    r = verify_family(FinDimAlgebra((1, 2, 3)), 1)
    assert r["family_size"] == 3 and r["independent"]
    r = verify_family(FinDimAlgebra((1, 2)), 0)
    assert r["family_size"] == 1 and r["ok"]


def test_verify_family_dense_path(monkeypatch):
    import lamplighter_k.findim as fd

    # force the general (non-diagonal) code path on a small case
    monkeypatch.setattr(fd.BlockElement, "is_diagonal", lambda self: False)
    r = fd.verify_family(FinDimAlgebra((1, 2)), 2)
    assert r["ok"] and r["rank"] == 4


def test_m_matrix_examples():
    assert m_matrix(FinDimAlgebra((1, 2))) == [[1, 0], [2, 1]]
    assert m_matrix(FinDimAlgebra((1,))) == [[1]]
    for sizes in SMALL:
        assert m_matrix(FinDimAlgebra(sizes)).det() == 1


def test_m_tensor_examples():
    A = FinDimAlgebra((1, 2))
    assert m_tensor(A, 2) == [[1, 0, 0, 0], [2, 1, 0, 0], [2, 0, 1, 0], [4, 2, 2, 1]]
    assert m_tensor(A, 0) == [[1]]
    with pytest.raises(CapExceeded):
        m_tensor(FinDimAlgebra((1, 2, 2, 2)), 7)


@pytest.mark.parametrize("sizes", SMALL)
def test_m_tensor_unimodular_and_functorial(sizes):
    A = FinDimAlgebra(sizes)
    for s, t in [(0, 1), (1, 1), (1, 2)]:
        assert m_tensor(A, s + t) == m_tensor(A, s).kron(m_tensor(A, t))
    for t in range(3):
        M = m_tensor(A, t)
        S, U, V = smith_normal_form(M)
        n = M.shape[0]
        assert S == IntMatrix.identity(n) and M.det() == 1
        inv = M.inverse()
        assert M @ inv == IntMatrix.identity(n)
        assert inv == kron_power(m_matrix(A).inverse(), t)


def test_verify_k0_diagram_examples():
    r = verify_k0_diagram(FinDimAlgebra((1, 2)), 1)
    assert r["computed"] == [[1, 0], [2, 1]] and r["ok"]
    r = verify_k0_diagram(FinDimAlgebra((1,)), 3)
    assert r["computed"] == [[1]] and r["ok"]
    r = verify_k0_diagram(FinDimAlgebra((1, 2, 2)), 2)
    M1 = [[1, 0, 0], [2, 1, 0], [2, 0, 1]]
    assert r["computed"] == ref.kron(M1, M1) and r["ok"]


def test_rank_map_single_factor():
    # minimal projections of D_f: q_0 = 1 - Σ e_i has ranks (1, k_1 - 1, ...)
    assert rank_map(FinDimAlgebra((1, 3, 2)), 1) == [[1, 0, 0], [2, 1, 0], [1, 0, 1]]


@pytest.mark.parametrize("sizes", SMALL)
def test_function_algebra_iso(sizes):
    A = FinDimAlgebra(sizes)
    for t in range(3):
        r = verify_function_algebra_iso(A, t)
        assert r["ok"] and r["span_dimension"] == (A.n + 1) ** t


def test_function_algebra_iso_examples():
    assert verify_function_algebra_iso(FinDimAlgebra((1, 1)), 2)["span_dimension"] == 4
    r = verify_function_algebra_iso(FinDimAlgebra((1,)), 2)
    assert r["span_dimension"] == 1 and r["ok"]
