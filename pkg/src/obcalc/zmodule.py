"""Exact integer linear algebra: Smith normal form and cokernels.

All arithmetic uses Python ints, so pivots can grow without overflow.

>>> cokernel(IntMatrix.from_rows([[2, 4], [6, 8]]))
AbelianGroup(free_rank=0, torsion=(2, 4))
>>> str(cokernel(IntMatrix.from_rows([[0]])))
'Z'
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix with explicit shape (so 0 x n and n x 0 exist)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        if entries is None:
            self._data = [[0] * cols for _ in range(rows)]
        else:
            data = [[int(x) for x in row] for row in entries]
            if len(data) != rows or any(len(row) != cols for row in data):
                raise ValueError(f"entries do not form a {rows}x{cols} grid")
            self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, x in enumerate(col):
                m._data[i][j] = int(x)
        return m

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        m = cls(n, n)
        for i in range(n):
            m._data[i][i] = 1
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._data[i][j]

    def __setitem__(self, idx: tuple[int, int], value: int) -> None:
        i, j = idx
        self._data[i][j] = int(value)

    def row(self, i: int) -> list[int]:
        return list(self._data[i])

    def column(self, j: int) -> list[int]:
        return [self._data[i][j] for i in range(self.rows)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def copy(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self._data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    T = property(transpose)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = IntMatrix(self.rows, other.cols)
        ocols = [other.column(j) for j in range(other.cols)]
        for i, r in enumerate(self._data):
            out._data[i] = [sum(a * b for a, b in zip(r, c)) for c in ocols]
        return out

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols,
                         [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self._data])

    def _check_same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(map(tuple, self._data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {self._data!r})"

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [r + s for r, s in zip(self._data, other._data)])

    def is_diagonal(self) -> bool:
        return all(self._data[i][j] == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def determinant(self) -> int:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign = 1
        prev = 1
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


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk.

    The torsion tuple is kept as an invariant-factor chain d1 | d2 | ...
    with every di >= 2, so two isomorphic groups compare equal.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        t = tuple(self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"invariant factors must be >= 2, got {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], generators: int) -> AbelianGroup:
        """Group Z^generators / <d_i e_i>; zeros on the diagonal mean free summands."""
        diag = [abs(int(d)) for d in diagonal]
        if len(diag) > generators:
            raise ValueError("more relations on the diagonal than generators")
        free = generators - len(diag) + sum(1 for d in diag if d == 0)
        return cls(free, _invariant_factors([d for d in diag if d > 1]))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __add__(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup(self.free_rank + other.free_rank,
                            _invariant_factors(self.torsion + other.torsion))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


def _invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Merge cyclic orders (each >= 2) into a divisibility chain."""
    orders = [o for o in orders if o > 1]
    if not orders:
        return ()
    # Diagonal SNF of diag(orders) is the chain we want.
    m = IntMatrix(len(orders), len(orders))
    for i, o in enumerate(orders):
        m[i, i] = o
    _, d, _ = smith_normal_form(m)
    return tuple(x for x in d.diagonal() if x > 1)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U, V unimodular and U @ m @ V == D.

    D is diagonal, its diagonal entries are non-negative and each one
    divides the next (zeros trail at the end).

    >>> U, D, V = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> D.diagonal()
    [2, 4]
    >>> U @ IntMatrix.from_rows([[2, 4], [6, 8]]) @ V == D
    True
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        if k:
            for r in a:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                continue
            # Row/column t are clear; enforce divisibility on the remainder.
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (IntMatrix(rows, rows, u), IntMatrix(rows, cols, a), IntMatrix(cols, cols, v))


def cokernel(m: IntMatrix) -> AbelianGroup:
    """Z^rows modulo the span of the columns of m, in canonical form."""
    _, d, _ = smith_normal_form(m)
    return AbelianGroup.from_diagonal(d.diagonal(), m.rows)


def cokernel_of_columns(columns: Sequence[Sequence[int]], rank: int) -> AbelianGroup:
    """Convenience wrapper: quotient of Z^rank by the given relation vectors."""
    if not columns:
        return AbelianGroup(rank)
    return cokernel(IntMatrix.from_columns(columns, rank))
