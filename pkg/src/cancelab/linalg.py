"""Matrices and vectors of polynomials, and the submodule machinery built on them.

Columns of a matrix are elements of a free module ``R^rows``.  Submodule
membership, lifting (solving ``A x = b``) and syzygies all go through the
vector Buchberger engine; the lifting basis is the POT Gröbner basis of the
stacked matrix ``[A; I]``, whose elements ``(m; c)`` always satisfy ``m = A c``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

from .groebner import Limits, current_limits, vector_gb, vector_reduce
from .polyring import MonomialOrder, Polynomial, PolynomialRing

__all__ = [
    "Matrix",
    "FreeModuleElement",
    "submodule_contains",
    "lift",
    "syzygies",
    "determinant",
    "minors",
    "rank_over_fraction_field",
]


class FreeModuleElement:
    """A vector of polynomials in ``R^n``."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: PolynomialRing, coords: Iterable):
        self.ring = ring
        self.coords = tuple(ring(c) for c in coords)

    @classmethod
    def unit(cls, ring: PolynomialRing, n: int, i: int) -> FreeModuleElement:
        return cls(ring, [1 if k == i else 0 for k in range(n)])

    @classmethod
    def zero(cls, ring: PolynomialRing, n: int) -> FreeModuleElement:
        return cls(ring, [0] * n)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def _check(self, other):
        if not isinstance(other, FreeModuleElement) or other.rank != self.rank:
            raise ValueError("ambient rank mismatch")

    def __add__(self, other):
        self._check(other)
        return FreeModuleElement(self.ring, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return FreeModuleElement(self.ring, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FreeModuleElement(self.ring, [-a for a in self.coords])

    def __mul__(self, f):
        return FreeModuleElement(self.ring, [a * f for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, FreeModuleElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ", ".join(map(str, self.coords)) + ")"

    def as_column(self) -> Matrix:
        return Matrix(self.ring, [[c] for c in self.coords], nrows=self.rank, ncols=1)


class Matrix:
    """Immutable ``nrows x ncols`` matrix of polynomials (row-major storage)."""

    __slots__ = ("ring", "nrows", "ncols", "rows", "_hash")

    def __init__(self, ring: PolynomialRing, rows: Sequence[Sequence], nrows: int | None = None,
                 ncols: int | None = None):
        rows = tuple(tuple(ring(x) for x in r) for r in rows)
        self.ring = ring
        self.nrows = len(rows) if nrows is None else nrows
        self.ncols = (len(rows[0]) if rows else 0) if ncols is None else ncols
        if len(rows) != self.nrows or any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self._hash = None

    # -- constructors
    @classmethod
    def zero(cls, ring, nrows: int, ncols: int) -> Matrix:
        z = ring.zero()
        return cls(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring, n: int) -> Matrix:
        return cls.diag(ring, [1] * n)

    @classmethod
    def diag(cls, ring, entries: Sequence) -> Matrix:
        n = len(entries)
        z = ring.zero()
        return cls(ring, [[ring(entries[i]) if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, ring, nrows: int, columns: Sequence[Sequence]) -> Matrix:
        cols = [tuple(c) for c in columns]
        if any(len(c) != nrows for c in cols):
            raise ValueError("column length mismatch")
        return cls(ring, [[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def row(cls, ring, entries: Sequence) -> Matrix:
        return cls(ring, [list(entries)], 1, len(entries))

    @classmethod
    def column(cls, ring, entries: Sequence) -> Matrix:
        return cls(ring, [[e] for e in entries], len(entries), 1)

    # -- access
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def column_vector(self, j: int) -> FreeModuleElement:
        return FreeModuleElement(self.ring, self.col(j))

    def select_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix(self.ring, [[r[j] for j in idx] for r in self.rows], self.nrows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> Matrix:
        return Matrix(self.ring, [self.rows[i] for i in idx], len(idx), self.ncols)

    def entries(self):
        for r in self.rows:
            yield from r

    # -- arithmetic
    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
            cols = other.columns()
            z = self.ring.zero()
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = z
                    for a, b in zip(r, c):
                        if a and b:
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return Matrix(self.ring, out, self.nrows, other.ncols)
        if isinstance(other, FreeModuleElement):
            return FreeModuleElement(self.ring, (self * other.as_column()).col(0))
        return Matrix(self.ring, [[a * other for a in r] for r in self.rows], self.nrows, self.ncols)

    def __rmul__(self, f):
        return self * f

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __neg__(self):
        return Matrix(self.ring, [[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> Matrix:
        return Matrix(self.ring, [list(c) for c in self.columns()], self.ncols, self.nrows)

    def hstack(self, *others: Matrix) -> Matrix:
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("row count mismatch")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return Matrix(self.ring, rows, self.nrows, ncols)

    def vstack(self, *others: Matrix) -> Matrix:
        rows = list(self.rows)
        for o in others:
            if o.ncols != self.ncols:
                raise ValueError("column count mismatch")
            rows.extend(o.rows)
        return Matrix(self.ring, rows, len(rows), self.ncols)

    @classmethod
    def block_diag(cls, ring, *blocks: Matrix) -> Matrix:
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        z = ring.zero()
        rows = [[z] * nc for _ in range(nr)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[r0 + i][c0 + j] = b.rows[i][j]
            r0 += b.nrows
            c0 += b.ncols
        return cls(ring, rows, nr, nc)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries())

    def substitute(self, images, target: PolynomialRing | None = None) -> Matrix:
        target = target or self.ring
        return Matrix(target, [[a.substitute(images, target) for a in r] for r in self.rows],
                      self.nrows, self.ncols)

    def map_entries(self, fn, target: PolynomialRing | None = None) -> Matrix:
        target = target or self.ring
        return Matrix(target, [[fn(a) for a in r] for r in self.rows], self.nrows, self.ncols)

    def drop_zero_columns(self) -> Matrix:
        keep = [j for j in range(self.ncols) if any(not r[j].is_zero() for r in self.rows)]
        return self.select_columns(keep)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.ring.compatible(other.ring) and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return "Matrix(" + repr(self.to_strings()) + ")"


# --------------------------------------------------------------------------
# bridging to the vector engine


def _col_vec(col: Sequence[Polynomial], offset: int = 0) -> dict:
    v = {}
    for i, p in enumerate(col):
        for e, c in p.items():
            v[(i + offset, e)] = c
    return v


def _vec_col(v: dict, ring: PolynomialRing, n: int, offset: int = 0) -> tuple:
    parts: list[dict] = [{} for _ in range(n)]
    for (p, e), c in v.items():
        k = p - offset
        if 0 <= k < n:
            parts[k][e] = c
    return tuple(Polynomial(ring, d) for d in parts)


@lru_cache(maxsize=1024)
def _submodule_gb(A: Matrix, order: MonomialOrder, limits: Limits) -> tuple:
    vecs = [_col_vec(c) for c in A.columns()]
    return tuple(vector_gb(vecs, A.ring.field, order, "POT", limits))


@lru_cache(maxsize=1024)
def _lift_gb(A: Matrix, order: MonomialOrder, limits: Limits) -> tuple:
    F = A.ring.field
    one = A.ring.zero_exp
    vecs = []
    for j, c in enumerate(A.columns()):
        v = _col_vec(c)
        v[(A.nrows + j, one)] = F.one
        vecs.append(v)
    return tuple(vector_gb(vecs, F, order, "POT", limits))


def reduce_column(A: Matrix, b: Sequence[Polynomial]) -> tuple:
    """Normal form of ``b`` modulo the column span of ``A``."""
    ring = A.ring
    gb = _submodule_gb(A, ring.order, current_limits())
    r = vector_reduce(_col_vec(b), gb, ring.field, ring.order)
    return _vec_col(r, ring, A.nrows)


def submodule_contains(A: Matrix, b: Sequence[Polynomial]) -> bool:
    """Whether the vector ``b`` lies in the column span of ``A``."""
    if all(p.is_zero() for p in b):
        return True
    if A.ncols == 0:
        return False
    ring = A.ring
    gb = _submodule_gb(A, ring.order, current_limits())
    return not vector_reduce(_col_vec(b), gb, ring.field, ring.order)


def columns_in_span(A: Matrix, B: Matrix) -> bool:
    return all(submodule_contains(A, c) for c in B.columns())


def lift(A: Matrix, B: Matrix | Sequence[Polynomial]) -> Matrix | None:
    """Solve ``A X = B`` exactly; ``None`` when some column of ``B`` is not in the span."""
    ring = A.ring
    if not isinstance(B, Matrix):
        B = Matrix.column(ring, list(B))
    if B.nrows != A.nrows:
        raise ValueError("row count mismatch")
    if B.ncols == 0:
        return Matrix.zero(ring, A.ncols, 0)
    if A.ncols == 0:
        return Matrix.zero(ring, 0, B.ncols) if B.is_zero() else None
    gb = _lift_gb(A, ring.order, current_limits())
    cols = []
    for b in B.columns():
        r = vector_reduce(_col_vec(b), gb, ring.field, ring.order)
        if any(p < A.nrows for p, _ in r):
            return None
        cols.append(tuple(-p for p in _vec_col(r, ring, A.ncols, A.nrows)))
    X = Matrix.from_columns(ring, A.ncols, cols)
    if A * X != B:  # pragma: no cover - invariant of the stacked basis
        raise AssertionError("lift failed to re-expand")
    return X


def syzygies(A: Matrix) -> Matrix:
    """Matrix ``S`` whose columns generate the kernel of ``A: R^ncols -> R^nrows``."""
    ring = A.ring
    n = A.ncols
    if n == 0:
        return Matrix.zero(ring, 0, 0)
    if A.nrows == 0 or A.is_zero():
        return Matrix.identity(ring, n)
    gb = _lift_gb(A, ring.order, current_limits())
    key_rows = A.nrows
    cols = []
    for v in gb:
        if all(p >= key_rows for p, _ in v):
            cols.append(_vec_col(v, ring, n, key_rows))
    return Matrix.from_columns(ring, n, cols)


def submodule_gb_columns(A: Matrix, order: MonomialOrder | None = None,
                         module_order: str = "POT") -> list[FreeModuleElement]:
    ring = A.ring
    order = order or ring.order
    vecs = [_col_vec(c) for c in A.columns()]
    gb = vector_gb(vecs, ring.field, order, module_order)
    return [FreeModuleElement(ring, _vec_col(v, ring, A.nrows)) for v in gb]


# --------------------------------------------------------------------------
# determinants and ranks


def determinant(A: Matrix) -> Polynomial:
    """Determinant by Laplace expansion with memoisation over column subsets."""
    if A.nrows != A.ncols:
        raise ValueError("square matrix required")
    n = A.nrows
    ring = A.ring
    rows = A.rows
    memo: dict = {}

    def det(r: int, cols: tuple) -> Polynomial:
        if r == n:
            return ring.one()
        if (r, cols) in memo:
            return memo[(r, cols)]
        total = ring.zero()
        for k, j in enumerate(cols):
            a = rows[r][j]
            if a.is_zero():
                continue
            sub = det(r + 1, cols[:k] + cols[k + 1:])
            total = total + a * sub if k % 2 == 0 else total - a * sub
        memo[(r, cols)] = total
        return total

    return det(0, tuple(range(n)))


def minors(A: Matrix, k: int) -> list[Polynomial]:
    """All nonzero ``k x k`` minors (``k = 0`` gives ``[1]``)."""
    ring = A.ring
    if k == 0:
        return [ring.one()]
    if k > min(A.nrows, A.ncols):
        return []
    out = []
    for rs in itertools.combinations(range(A.nrows), k):
        sub_rows = A.select_rows(rs)
        for cs in itertools.combinations(range(A.ncols), k):
            d = determinant(sub_rows.select_columns(cs))
            if not d.is_zero():
                out.append(d)
    return out


def rank_over_fraction_field(A: Matrix) -> tuple[int, list[int], list[int]]:
    """Rank over Frac(R) by fraction-free elimination.

    Returns ``(rank, pivot_rows, pivot_cols)``; the submatrix of ``A`` on those
    rows and columns is a nonvanishing maximal minor.
    """
    rows = [list(r) for r in A.rows]
    row_ids = list(range(A.nrows))
    piv_rows, piv_cols = [], []
    r = 0
    for c in range(A.ncols):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        row_ids[r], row_ids[p] = row_ids[p], row_ids[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            if a.is_zero():
                continue
            rows[i] = [piv * x - a * y for x, y in zip(rows[i], rows[r])]
        piv_rows.append(row_ids[r])
        piv_cols.append(c)
        r += 1
        if r == len(rows):
            break
    return r, sorted(piv_rows), piv_cols
