"""Exact linear algebra over prime fields GF(q)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def inverse(a: int, q: int) -> int:
    """Multiplicative inverse of ``a`` mod ``q`` by extended Euclid."""
    a %= q
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {q}")
    r0, r1 = q, a
    t0, t1 = 0, 1
    while r1:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        t0, t1 = t1, t0 - quot * t1
    return t0 % q


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class GFMatrix:
    """Dense matrix over GF(q) stored row-major as a tuple of row tuples."""

    q: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative dimension")
        if len(self.entries) != self.rows:
            raise DimensionError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionError(f"expected {self.cols} columns, got {len(row)}")
            for v in row:
                if not 0 <= v < self.q:
                    raise ValueError(f"entry {v} not reduced mod {self.q}")

    @classmethod
    def from_rows(cls, q: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "GFMatrix":
        rows = [tuple(int(v) % q for v in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(q, len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, q: int, columns: Sequence[Sequence[int]], rows: int) -> "GFMatrix":
        for c in columns:
            if len(c) != rows:
                raise DimensionError(f"column of length {len(c)} in a {rows}-row matrix")
        data = tuple(tuple(int(c[i]) % q for c in columns) for i in range(rows))
        return cls(q, rows, len(columns), data)

    @classmethod
    def zeros(cls, q: int, rows: int, cols: int) -> "GFMatrix":
        return cls(q, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, q: int, size: int) -> "GFMatrix":
        return cls(q, size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(row[k] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(k) for k in range(self.cols)]

    def transpose(self) -> "GFMatrix":
        return GFMatrix.from_columns(self.q, list(self.entries), self.cols) if self.rows else GFMatrix.zeros(self.q, self.cols, 0)

    def hstack(self, *others: "GFMatrix") -> "GFMatrix":
        return hstack(self.rows, self.q, [self, *others])

    def __matmul__(self, other: "GFMatrix") -> "GFMatrix":
        if self.cols != other.rows or self.q != other.q:
            raise DimensionError("incompatible product")
        q = self.q
        cols = other.columns()
        data = [[sum(a * b for a, b in zip(row, c)) % q for c in cols] for row in self.entries]
        return GFMatrix(q, self.rows, other.cols, tuple(tuple(r) for r in data))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def hstack(rows: int, q: int, blocks: Iterable[GFMatrix]) -> GFMatrix:
    """Concatenate column blocks; an empty iterable gives a ``rows x 0`` matrix."""
    data = [[] for _ in range(rows)]
    cols = 0
    for b in blocks:
        if b.rows != rows:
            raise DimensionError(f"block has {b.rows} rows, expected {rows}")
        if b.q != q:
            raise DimensionError("blocks over different fields")
        for i, row in enumerate(b.entries):
            data[i].extend(row)
        cols += b.cols
    return GFMatrix(q, rows, cols, tuple(tuple(r) for r in data))


def _rref_rows(rows: list[list[int]], ncols: int, q: int) -> tuple[list[list[int]], list[int]]:
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = inverse(rows[r][c], q)
        rows[r] = [(v * inv) % q for v in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: GFMatrix) -> tuple[GFMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    rows, pivots = _rref_rows([list(r) for r in m.entries], m.cols, m.q)
    return GFMatrix(m.q, m.rows, m.cols, tuple(tuple(r) for r in rows)), len(pivots), pivots


def rank(m: GFMatrix) -> int:
    return rank_of_columns(m.columns(), m.rows, m.q)


def rank_of_columns(columns: Sequence[Sequence[int]], length: int, q: int) -> int:
    """Rank of a set of vectors; eliminates on the vectors as rows (rank is transpose-invariant)."""
    rows = [[v % q for v in c] for c in columns if any(v % q for v in c)]
    if not rows:
        return 0
    _, pivots = _rref_rows(rows, length, q)
    return len(pivots)


def in_span(v: Sequence[int], basis: GFMatrix) -> bool:
    """True iff column vector ``v`` lies in the column space of ``basis``."""
    if len(v) != basis.rows:
        raise DimensionError(f"vector of length {len(v)} against {basis.rows}-row basis")
    cols = basis.columns()
    return rank_of_columns(cols, basis.rows, basis.q) == rank_of_columns(cols + [tuple(v)], basis.rows, basis.q)


def subspace_contained(a: GFMatrix, b: GFMatrix) -> bool:
    """True iff colspace(a) is a subspace of colspace(b)."""
    if a.rows != b.rows:
        raise DimensionError(f"row counts differ: {a.rows} vs {b.rows}")
    if a.q != b.q:
        raise DimensionError("matrices over different fields")
    bc = b.columns()
    return rank_of_columns(bc, b.rows, b.q) == rank_of_columns(bc + a.columns(), b.rows, b.q)


def span_contains(vectors: Sequence[Sequence[int]], v: Sequence[int], length: int, q: int) -> bool:
    """Column-list form of :func:`in_span` used on hot paths."""
    return rank_of_columns(vectors, length, q) == rank_of_columns(list(vectors) + [v], length, q)
