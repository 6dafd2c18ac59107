"""Immutable exact matrices with explicit shape (0 x n and n x 0 are legal)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from operator import add, mul, sub

from ..errors import InputError
from .rings import Ring


_set = object.__setattr__


def _normalize_q(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _reducer(ring: Ring):
    """Per-entry normalisation after arithmetic; ``None`` when it is a no-op."""
    if ring.tag == "z":
        return None
    if ring.tag == "q":
        return _normalize_q
    return ring.reduce


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows", "_hash")

    def __init__(self, ring: Ring, rows, ncols: int | None = None):
        rows = tuple(tuple(ring.coerce(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise InputError("matrix: column count of an empty matrix is ambiguous")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise InputError(f"matrix: ragged row (expected {ncols} entries, got {len(r)})")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, ring: Ring, rows, ncols: int) -> "Matrix":
        # trusted constructor: entries already canonical
        m = object.__new__(cls)
        _set(m, "ring", ring)
        _set(m, "nrows", len(rows))
        _set(m, "ncols", ncols)
        _set(m, "rows", tuple(map(tuple, rows)))
        _set(m, "_hash", None)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(ring, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls._raw(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def scalar(cls, ring: Ring, n: int, c) -> "Matrix":
        c = ring.coerce(c)
        return cls._raw(ring, [[c if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, ring: Ring, nrows: int, cols) -> "Matrix":
        cols = list(cols)
        return cls._raw(ring, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.ring, [list(c) for c in zip(*self.rows)] if self.nrows else
                           [[] for _ in range(self.ncols)], self.nrows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, self.nrows, self.ncols, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.ring.format_element(x) for x in r) for r in self.rows)
        return f"Matrix<{self.nrows}x{self.ncols} over {self.ring}>[{body}]"

    def _check(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise InputError(f"matrix: ring mismatch {self.ring} vs {other.ring}")

    def _zip_with(self, other: "Matrix", op, what: str) -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise InputError(f"matrix: cannot {what} {self.shape} and {other.shape}")
        red = _reducer(self.ring)
        if red is None:
            rows = [[op(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        else:
            rows = [[red(op(a, b)) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return Matrix._raw(self.ring, rows, self.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._zip_with(other, add, "add")

    def __neg__(self) -> "Matrix":
        red = self.ring.reduce
        return Matrix._raw(self.ring, [[red(-a) for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._zip_with(other, sub, "subtract")

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        red = self.ring.reduce
        return Matrix._raw(self.ring, [[red(c * a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise InputError(f"matrix: cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        red = _reducer(self.ring)
        if red is None:
            out = [[sum(map(mul, r, c)) for c in cols] for r in self.rows]
        elif self.ring.tag == "fp":
            p = self.ring.p
            out = [[sum(map(mul, r, c)) % p for c in cols] for r in self.rows]
        else:
            out = [[red(sum(a * b for a, b in zip(r, c) if a)) for c in cols] for r in self.rows]
        return Matrix._raw(self.ring, out, other.ncols)

    def hstack(self, *others: "Matrix") -> "Matrix":
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            self._check(o)
            if o.nrows != self.nrows:
                raise InputError("matrix: hstack row mismatch")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return Matrix._raw(self.ring, rows, ncols)

    def vstack(self, *others: "Matrix") -> "Matrix":
        rows = [list(r) for r in self.rows]
        for o in others:
            self._check(o)
            if o.ncols != self.ncols:
                raise InputError("matrix: vstack column mismatch")
            rows.extend(list(r) for r in o.rows)
        return Matrix._raw(self.ring, rows, self.ncols)

    def submatrix(self, rows, cols) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix._raw(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))


def block_diag(ring: Ring, blocks) -> Matrix:
    blocks = list(blocks)
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = [[0] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Matrix._raw(ring, out, nc)


def determinant(m: Matrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.nrows != m.ncols:
        raise InputError("determinant of a non-square matrix")
    ring = m.ring
    n = m.nrows
    if n == 0:
        return ring.coerce(1)
    if ring.tag == "fp":
        a = m.tolist()
        p = ring.p
        det = 1
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k]), None)
            if piv is None:
                return 0
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det = det * a[k][k] % p
            inv = pow(a[k][k], -1, p)
            for i in range(k + 1, n):
                f = a[i][k] * inv % p
                if f:
                    for j in range(k, n):
                        a[i][j] = (a[i][j] - f * a[k][j]) % p
        return det % p
    a = m.tolist()
    scale = 1
    if ring.tag == "q":
        # clear denominators row by row so the elimination stays in Z
        for r in a:
            den = 1
            for x in r:
                if type(x) is Fraction:
                    den = den * x.denominator // gcd(den, x.denominator)
            if den != 1:
                r[:] = [int(x * den) for x in r]
                scale *= den
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return ring.coerce(0)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = v // prev
            a[i][k] = 0
        prev = a[k][k]
    return ring.coerce(Fraction(sign * a[n - 1][n - 1], scale))
