"""Finite-dimensional block algebras A = C ⊕ M_k1 ⊕ ... ⊕ M_kn and their tensor powers.

Elements of the t-fold tensor power are stored block by block: the block algebra of
A^{⊗t} is indexed by multi-indices (i_1, ..., i_t) and the block at a multi-index has
size k_{i_1}···k_{i_t}.  All arithmetic is exact (int64 for 0/1 data, Python ints or
Fractions in object arrays otherwise).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .caps import DEFAULT_CAPS
from .errors import InvariantViolation, UnsupportedModel, check_cap
from .groups import GroupModel, conjugacy_classes
from .intmatrix import IntMatrix, exact_rank, kron_power, smith_normal_form

__all__ = [
    "FinDimAlgebra", "BlockElement", "validate_algebra", "algebra_from_group",
    "minimal_projections", "unit", "e_phi", "label_functions", "rank_vector",
    "verify_family", "m_matrix", "m_tensor", "rank_map", "verify_k0_diagram",
    "verify_function_algebra_iso", "smith_normal_form", "IntMatrix",
]


@dataclass(frozen=True)
class FinDimAlgebra:
    """Block sizes (1, k1, ..., kn).  Sizes may be None when only the block count is known."""

    block_sizes: tuple

    def __post_init__(self):
        if not self.block_sizes or self.block_sizes[0] != 1:
            raise ValueError("the first block must have size 1")

    @property
    def n(self) -> int:
        return len(self.block_sizes) - 1

    @property
    def symbolic(self) -> bool:
        return any(k is None for k in self.block_sizes)

    @property
    def sizes(self) -> tuple[int, ...]:
        if self.symbolic:
            raise ValueError("block sizes of this algebra are not known")
        return self.block_sizes

    @property
    def dimension(self) -> int:
        return sum(k * k for k in self.sizes)


def validate_algebra(block_sizes: Sequence[int]) -> FinDimAlgebra:
    """Accept a block list containing a 1 and move that block to the front.

    Without a one-dimensional summand the infinite tensor power is a UHF-type algebra
    (for instance A = M_2) and the corner argument used here has nothing to grip on.
    """
    sizes = [int(k) for k in block_sizes]
    if not sizes or any(k < 1 for k in sizes):
        raise ValueError(f"block sizes must be positive integers, got {list(block_sizes)}")
    if 1 not in sizes:
        raise UnsupportedModel(
            f"block sizes {sizes} have no 1x1 block; the tensor power is then UHF-like "
            "and the projection-family method does not apply")
    i = sizes.index(1)
    return FinDimAlgebra(tuple([1] + sizes[:i] + sizes[i + 1:]))


def algebra_from_group(sigma: GroupModel) -> FinDimAlgebra:
    """Block structure of the group algebra of a finite group: one block per
    conjugacy class, the trivial representation giving the 1x1 block.  The other
    block sizes (irreducible dimensions) are left unknown."""
    if not sigma.is_finite:
        raise UnsupportedModel("group algebra blocks need a finite group")
    count = len(conjugacy_classes(sigma))
    return FinDimAlgebra((1,) + (None,) * (count - 1))


# -- block elements ---------------------------------------------------------

def _multi_indices(n: int, t: int):
    return list(itertools.product(range(n + 1), repeat=t))


def _is_diagonal(b: np.ndarray) -> bool:
    return not np.any(b - np.diag(np.diag(b)))


@dataclass(frozen=True, eq=False)
class BlockElement:
    """Element of A^{⊗t}; ``blocks`` maps a multi-index to a square matrix, absent means 0."""

    algebra: FinDimAlgebra
    t: int
    blocks: Mapping[tuple, np.ndarray] = field(repr=False)

    def block_size(self, idx: tuple) -> int:
        return math.prod(self.algebra.sizes[i] for i in idx)

    def block(self, idx: tuple) -> np.ndarray:
        b = self.blocks.get(idx)
        if b is None:
            s = self.block_size(idx)
            return np.zeros((s, s), dtype=np.int64)
        return b

    def _combine(self, other: "BlockElement", op) -> "BlockElement":
        if other.algebra != self.algebra or other.t != self.t:
            raise ValueError("elements live in different algebras")
        keys = sorted(set(self.blocks) | set(other.blocks))
        return BlockElement(self.algebra, self.t, {k: op(self.block(k), other.block(k)) for k in keys})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __matmul__(self, other):
        return self._combine(other, lambda a, b: a @ b)

    def adjoint(self) -> "BlockElement":
        # entries are real, so the adjoint is the transpose
        return BlockElement(self.algebra, self.t, {k: b.T for k, b in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, BlockElement):
            return NotImplemented
        if other.algebra != self.algebra or other.t != self.t:
            return False
        return all(np.array_equal(self.block(k), other.block(k))
                   for k in set(self.blocks) | set(other.blocks))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(np.any(b) for b in self.blocks.values())

    def is_diagonal(self) -> bool:
        return all(_is_diagonal(b) for b in self.blocks.values())

    def diagonal(self) -> np.ndarray:
        """Concatenated diagonal over all multi-indices in lexicographic order."""
        parts = [np.diag(self.block(idx)) for idx in _multi_indices(self.algebra.n, self.t)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_projection(self) -> bool:
        for b in self.blocks.values():
            if _is_diagonal(b):
                d = np.diag(b)
                if np.any(d * d != d):
                    return False
            elif not (np.array_equal(b @ b, b) and np.array_equal(b.T, b)):
                return False
        return True


def unit(A: FinDimAlgebra, t: int = 1) -> BlockElement:
    sizes = A.sizes
    return BlockElement(A, t, {idx: np.eye(math.prod(sizes[i] for i in idx), dtype=np.int64)
                               for idx in _multi_indices(A.n, t)})


def _matrix_unit(k: int) -> np.ndarray:
    E = np.zeros((k, k), dtype=np.int64)
    E[0, 0] = 1
    return E


def minimal_projections(A: FinDimAlgebra) -> list[BlockElement]:
    """e_0, ..., e_n with e_i the (1,1) matrix unit of block i (e_0 = unit of the C block)."""
    return [BlockElement(A, 1, {(i,): _matrix_unit(k)}) for i, k in enumerate(A.sizes)]


def _tensor(A: FinDimAlgebra, factors: Sequence[Mapping[int, np.ndarray]]) -> BlockElement:
    """Elementary tensor of single-factor elements given as {block index: matrix}."""
    blocks = {}
    for idx in _multi_indices(A.n, len(factors)):
        b = np.ones((1, 1), dtype=np.int64)
        for f, i in zip(factors, idx):
            part = f.get(i)
            if part is None:
                b = None
                break
            b = np.kron(b, part)
        if b is not None:
            blocks[idx] = b
    return BlockElement(A, len(factors), blocks)


def _unit_factor(A):
    return {i: np.eye(k, dtype=np.int64) for i, k in enumerate(A.sizes)}


def e_phi(A: FinDimAlgebra, F: Sequence, phi: Mapping, cap: int = DEFAULT_CAPS.tensor_dim) -> BlockElement:
    """⊗_{f∈F} x_f with x_f = e_{φ(f)} on the domain of φ and x_f = 1 elsewhere.

    The empty φ gives the unit.  ``cap`` bounds the representation dimension (Σ k_i)^|F|.
    """
    F = list(F)
    check_cap("tensor_dim", sum(A.sizes) ** len(F), cap)
    extra = set(phi) - set(F)
    if extra:
        raise ValueError(f"φ is defined outside F: {sorted(extra, key=repr)}")
    factors = []
    for f in F:
        if f in phi:
            j = int(phi[f])
            if not 1 <= j <= A.n:
                raise ValueError(f"label {j} outside 1..{A.n}")
            factors.append({j: _matrix_unit(A.sizes[j])})
        else:
            factors.append(_unit_factor(A))
    return _tensor(A, factors)


def label_functions(n: int, F: Sequence) -> list[dict]:
    """All φ: F' → {1..n} for F' ⊆ F, ordered by the multi-index (j_f) with j_f = 0 off F'."""
    F = list(F)
    out = []
    for word in itertools.product(range(n + 1), repeat=len(F)):
        out.append({f: j for f, j in zip(F, word) if j})
    return out


def rank_vector(p: BlockElement) -> list[int]:
    """Matrix rank of each block of a projection, multi-indices in lexicographic order."""
    if not p.is_projection():
        raise InvariantViolation("rank_vector needs an exact projection")
    out = []
    for idx in _multi_indices(p.algebra.n, p.t):
        b = p.blocks.get(idx)
        # rank of an idempotent equals its trace
        out.append(0 if b is None else int(np.trace(b)))
    return out


# -- the projection family --------------------------------------------------

def _family(A, t, cap):
    F = list(range(t))
    phis = label_functions(A.n, F)
    return phis, [e_phi(A, F, phi, cap) for phi in phis]


def verify_family(A: FinDimAlgebra, t: int, cap: int = DEFAULT_CAPS.tensor_dim) -> dict:
    """Check the family {e_φ : φ: F' → {1..n}, F' ⊆ F} for |F| = t.

    Verifies that every member is a non-zero projection, that members commute, that
    products are zero or again members, and that the family is linearly independent.
    """
    phis, members = _family(A, t, cap)
    nonzero = all(not p.is_zero() for p in members)
    projections = all(p.is_projection() for p in members)
    diagonal = all(p.is_diagonal() for p in members)
    if diagonal:
        # diagonal matrices commute; products are entrywise on the diagonals
        D = np.array([p.diagonal() for p in members])
        commute = True
        lookup = {row.tobytes(): i for i, row in enumerate(D)}
        prods = D[:, None, :] * D[None, :, :]
        closed = all(not prods[i, j].any() or prods[i, j].tobytes() in lookup
                     for i in range(len(members)) for j in range(len(members)))
        coords = D
    else:
        commute = all((p @ q) == (q @ p) for p, q in itertools.combinations(members, 2))
        closed = True
        for p, q in itertools.product(members, repeat=2):
            pq = p @ q
            if not pq.is_zero() and not any(pq == r for r in members):
                closed = False
                break
        coords = np.array([np.concatenate([p.block(idx).ravel() for idx in _multi_indices(A.n, t)])
                           for p in members])
    # zero columns do not affect the rank
    coords = coords[:, np.any(coords != 0, axis=0)]
    rank = exact_rank(coords.tolist()) if coords.size else 0
    return {
        "algebra": list(A.sizes), "t": t, "family_size": len(members),
        "nonzero": nonzero, "projections": projections, "commute": commute,
        "closed_up_to_zero": closed, "rank": rank,
        "independent": rank == len(members),
        "ok": nonzero and projections and commute and closed and rank == len(members),
    }


# -- K0 bookkeeping -----------------------------------------------------------

def m_matrix(A: FinDimAlgebra) -> IntMatrix:
    """[1] ↦ Σ k_i [e_i], [e_i] ↦ [e_i]: first column (1, k_1, ..., k_n), identity elsewhere."""
    sizes = A.sizes
    n = A.n
    rows = [[int(i == j) for j in range(n + 1)] for i in range(n + 1)]
    for i in range(1, n + 1):
        rows[i][0] = sizes[i]
    return IntMatrix(rows)


def m_tensor(A: FinDimAlgebra, t: int, cap: int = DEFAULT_CAPS.matrix_dim) -> IntMatrix:
    check_cap("matrix_dim", (A.n + 1) ** t, cap)
    return kron_power(m_matrix(A), t)


def _point_projections(A: FinDimAlgebra, t: int, cap: int) -> list[BlockElement]:
    """Minimal projections q_x of D_F, x ∈ {0..n}^t: q_i = e_i for i ≥ 1, q_0 = 1 - Σ e_i."""
    check_cap("tensor_dim", sum(A.sizes) ** t, cap)
    single = []
    e = minimal_projections(A)
    q0 = unit(A) - BlockElement(A, 1, {(i,): _matrix_unit(k) for i, k in enumerate(A.sizes) if i})
    single.append(q0)
    single.extend(e[1:])
    out = []
    for x in _multi_indices(A.n, t):
        out.append(_tensor(A, [{i[0]: b for i, b in single[j].blocks.items()} for j in x]))
    return out


def rank_map(A: FinDimAlgebra, t: int, cap: int = DEFAULT_CAPS.tensor_dim) -> IntMatrix:
    """K0(D_F) → K0(⊗_F eAe) in the bases ([q_x]) and ([e_{i_1}⊗...]): columns are the
    rank vectors of the minimal projections q_x of D_F."""
    cols = [rank_vector(q) for q in _point_projections(A, t, cap)]
    return IntMatrix(cols).transpose() if cols else IntMatrix([[1]])


def _extension_matrix(n: int, t: int) -> IntMatrix:
    """B[x, j] = 1 iff the point x extends the partial label j (j_f = 0 means unlabelled)."""
    idx = _multi_indices(n, t)
    return IntMatrix([[int(all(jf == 0 or jf == xf for xf, jf in zip(x, j))) for j in idx] for x in idx])


def verify_k0_diagram(A: FinDimAlgebra, t: int, cap: int = DEFAULT_CAPS.tensor_dim) -> dict:
    """Compute the K0 map of D_F ↪ ⊗_F A ⇝ ⊗_F eAe from rank vectors and compare with M_F.

    [e_φ] = Σ_{x extends φ} [q_x], so the map in the basis {[1], [e_i]}^{⊗t} is
    rank_map · B with B the extension indicator.
    """
    check_cap("matrix_dim", (A.n + 1) ** t, DEFAULT_CAPS.matrix_dim)
    R = rank_map(A, t, cap)
    qs = _point_projections(A, t, cap)
    total = qs[0]
    for q in qs[1:]:
        total = total + q
    partition = total == unit(A, t) and all(not q.is_zero() for q in qs)
    computed = R @ _extension_matrix(A.n, t)
    expected = m_tensor(A, t)
    return {
        "algebra": list(A.sizes), "t": t, "partition_of_unity": partition,
        "computed": computed.tolist(), "expected": expected.tolist(),
        "ok": partition and computed == expected,
    }


def verify_function_algebra_iso(A: FinDimAlgebra, t: int, cap: int = DEFAULT_CAPS.tensor_dim) -> dict:
    """The span of the family over F is isomorphic to the functions on {0..n}^F via
    e_φ ↦ indicator of the cylinder {x : x|dom φ = φ}."""
    n = A.n
    check_cap("tensor_dim", (n + 1) ** t, cap)
    phis, members = _family(A, t, cap)
    points = _multi_indices(n, t)
    F = list(range(t))

    def cylinder(phi):
        return np.array([int(all(x[f] == j for f, j in phi.items())) for x in points], dtype=np.int64)

    images = np.array([cylinder(phi) for phi in phis])
    if not all(p.is_diagonal() for p in members):
        raise InvariantViolation("family members are expected to be diagonal")
    D = np.array([p.diagonal() for p in members])
    D = D[:, np.any(D != 0, axis=0)]
    span_dim = exact_rank(D.tolist())
    image_rank = exact_rank(images.tolist())
    lookup = {row.tobytes(): i for i, row in enumerate(D)}
    multiplicative = True
    for i, j in itertools.product(range(len(members)), repeat=2):
        prod = D[i] * D[j]
        target = images[i] * images[j]
        if not prod.any():
            ok = not target.any()
        else:
            k = lookup.get(prod.tobytes())
            ok = k is not None and np.array_equal(images[k], target)
        if not ok:
            multiplicative = False
            break
    expected = (n + 1) ** t
    return {
        "algebra": list(A.sizes), "t": t, "F": F,
        "span_dimension": span_dim, "expected_dimension": expected,
        "image_rank": image_rank, "multiplicative": multiplicative,
        "ok": span_dim == expected and image_rank == expected and multiplicative,
    }
