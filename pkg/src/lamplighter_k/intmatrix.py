"""Exact integer matrices: Kronecker products, determinants, rank, Smith normal form."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class IntMatrix:
    """Immutable matrix of Python ints (arbitrary precision)."""

    __slots__ = ("rows", "_snf")

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_snf", None)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self.rows == other.rows
        if isinstance(other, (list, tuple)):
            return self.rows == tuple(tuple(r) for r in other)
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows)) if self.rows else self

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        """Kronecker product; row index (i, k) ↦ i*rows(other) + k (lexicographic)."""
        return IntMatrix([[a * b for a in ra for b in rb]
                          for ra in self.rows for rb in other.rows])

    def det(self) -> int:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.rows])

    def rank(self) -> int:
        return exact_rank(self.rows)

    def smith(self):
        if self._snf is None:
            object.__setattr__(self, "_snf", smith_normal_form(self))
        return self._snf

    def inverse(self) -> "IntMatrix":
        """Integer inverse of a unimodular matrix, read off U·M·V = I as M⁻¹ = V·U."""
        S, U, V = self.smith()
        n = self.shape[0]
        if self.shape != (n, n) or S != IntMatrix.identity(n):
            raise ValueError("matrix is not invertible over the integers")
        return V @ U


def kron_power(M: IntMatrix, t: int) -> IntMatrix:
    out = IntMatrix.identity(1)
    for _ in range(t):
        out = out.kron(M)
    return out


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


_PRIME = 2_147_483_647


def _rank_mod_p(M: np.ndarray, p: int = _PRIME) -> int:
    A = np.array(M, dtype=object) % p
    A = A.astype(np.int64)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        below = np.nonzero(A[r + 1:, c])[0] + r + 1
        if len(below):
            # split the product to stay below 2**63
            f = A[below, c][:, None]
            hi, lo = f >> 16, f & 0xFFFF
            A[below] = (A[below] - ((hi * A[r]) % p * 65536 + lo * A[r]) % p) % p
        r += 1
    return r


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q.

    A full rank modulo a prime certifies full rank over Q (rank can only drop mod p);
    otherwise fall back to fraction-free elimination over the integers.
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows or not rows[0]:
        return 0
    full = min(len(rows), len(rows[0]))
    if _rank_mod_p(np.array(rows, dtype=object)) == full:
        return full
    return _bareiss_rank(rows)


def _bareiss_rank(a: list[list[int]]) -> int:
    a = [r[:] for r in a]
    n, m = len(a), len(a[0])
    r, prev = 0, 1
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == n:
            break
    return r


def smith_normal_form(M: IntMatrix):
    """Return (S, U, V) with U·M·V = S, U and V unimodular, S diagonal with
    nonnegative entries each dividing the next."""
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for R in A:
            R[dst] -= q * R[src]
        for R in V:
            R[dst] -= q * R[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix(A), IntMatrix(U), IntMatrix(V)
