"""Exact rational matrices and 3-index tensors.

Scalars are :class:`fractions.Fraction`; nothing in this module ever
touches a float.  Matrices and tensors are immutable and hashable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import product as _iproduct
from math import lcm
from typing import Callable, Iterable, Sequence

from .errors import NotSymmetric, ParseError, SingularMatrix, DimensionMismatch

Rational = Fraction

_RATIONAL_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ParseError(f"not a rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"malformed rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _leaves(x, out: list) -> list:
    if isinstance(x, (list, tuple)):
        for item in x:
            _leaves(item, out)
    else:
        out.append(x)
    return out


def _scaled(x, d: int):
    if isinstance(x, (list, tuple)):
        return [_scaled(item, d) for item in x]
    return x.numerator * (d // x.denominator)


def clear_denominators(*arrays) -> tuple:
    """Scale nested lists of rationals by one common denominator.

    Returns ``(d, *scaled)`` where each scaled array holds Python ints; the
    hot loops run on these since int arithmetic is far cheaper than Fraction.
    """
    d = 1
    for a in arrays:
        for v in _leaves(a, []):
            if v.denominator != 1:
                d = lcm(d, v.denominator)
    return (d, *(_scaled(a, d) for a in arrays))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Matrix:
    """Dense immutable matrix over the rationals."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        data = tuple(as_rational(x) for x in entries)
        if len(data) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # construction helpers
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence["Matrix | Sequence"], rows: int | None = None) -> "Matrix":
        cols = [list(c.entries) if isinstance(c, Matrix) else list(c) for c in columns]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        if any(len(c) != rows for c in cols):
            raise DimensionMismatch("ragged columns")
        return cls(rows, len(cols), [cols[j][i] for i in range(rows) for j in range(len(cols))])

    @classmethod
    def from_function(cls, rows: int, cols: int, fn: Callable[[int, int], object]) -> "Matrix":
        return cls(rows, cols, [fn(i, j) for i in range(rows) for j in range(cols)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_function(n, n, lambda i, j: 1 if i == j else 0)

    @classmethod
    def column(cls, values: Sequence) -> "Matrix":
        return cls(len(values), 1, values)

    @classmethod
    def diag(cls, *values) -> "Matrix":
        n = len(values)
        return cls.from_function(n, n, lambda i, j: values[i] if i == j else 0)

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * c for _ in range(r)]
        oi = oj = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[oi + i][oj + j] = b[i, j]
            oi += b.rows
            oj += b.cols
        return cls.from_rows(out, c)

    # access
    @property
    def entries(self) -> tuple:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self._data[j::self.cols] if self.cols else ()

    def column_vector(self, j: int) -> "Matrix":
        return Matrix.column(self.col(j))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list["Matrix"]:
        return [self.column_vector(j) for j in range(self.cols)]

    # algebra
    @property
    def T(self) -> "Matrix":
        return Matrix.from_function(self.cols, self.rows, lambda i, j: self[j, i])

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self._data])

    def __mul__(self, scalar) -> "Matrix":
        s = as_rational(scalar)
        return Matrix(self.rows, self.cols, [s * a for a in self._data])

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        da, a = clear_denominators(self.to_rows())
        db, b = clear_denominators(other.to_rows())
        bt = list(zip(*b)) if b else []
        d = da * db
        out = []
        for r in a:
            for c in bt:
                out.append(Fraction(sum(x * y for x, y in zip(r, c) if x and y), d))
        if not bt:
            out = [Fraction(0)] * (self.rows * other.cols)
        return Matrix(self.rows, other.cols, out)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_skew(self) -> bool:
        return self.is_square() and all(
            self[i, j] == -self[j, i] for i in range(self.rows) for j in range(i, self.cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix.from_rows([list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
                                self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix(self.rows + other.rows, self.cols, self._data + other._data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix.from_function(len(rows), len(cols), lambda i, j: self[rows[i], cols[j]])

    def det(self) -> Fraction:
        return determinant(self)

    def rank(self) -> int:
        return len(rref(self)[1])

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


class Tensor3:
    """Immutable 3-index array; entry ``(i, j, k)`` is stored row-major."""

    __slots__ = ("dims", "_data", "_hash")

    def __init__(self, dims: tuple[int, int, int], entries: Iterable = ()):
        n1, n2, n3 = dims
        data = tuple(as_rational(x) for x in entries)
        if len(data) != n1 * n2 * n3:
            raise DimensionMismatch(f"tensor {dims} needs {n1 * n2 * n3} entries, got {len(data)}")
        self.dims = (n1, n2, n3)
        self._data = data
        self._hash = None

    @classmethod
    def zeros(cls, n1: int, n2: int | None = None, n3: int | None = None) -> "Tensor3":
        n2 = n1 if n2 is None else n2
        n3 = n1 if n3 is None else n3
        return cls((n1, n2, n3), [0] * (n1 * n2 * n3))

    @classmethod
    def from_function(cls, dims, fn: Callable[[int, int, int], object]) -> "Tensor3":
        n1, n2, n3 = dims
        return cls(dims, [fn(i, j, k) for i, j, k in _iproduct(range(n1), range(n2), range(n3))])

    @classmethod
    def from_nested(cls, nested) -> "Tensor3":
        n1 = len(nested)
        n2 = len(nested[0]) if n1 else 0
        n3 = len(nested[0][0]) if n2 else 0
        return cls((n1, n2, n3), [x for plane in nested for row in plane for x in row])

    @classmethod
    def from_sparse(cls, n: int, entries: dict) -> "Tensor3":
        """Cube tensor from ``{(i, j): {k: coeff}}``."""
        out = [Fraction(0)] * (n ** 3)
        for (i, j), coeffs in entries.items():
            for k, c in coeffs.items():
                out[(i * n + j) * n + k] = as_rational(c)
        return cls((n, n, n), out)

    @property
    def entries(self) -> tuple:
        return self._data

    def __getitem__(self, idx):
        i, j, k = idx
        _, n2, n3 = self.dims
        return self._data[(i * n2 + j) * n3 + k]

    def vector(self, i: int, j: int) -> tuple:
        """Coefficients ``(i, j, :)``."""
        _, n2, n3 = self.dims
        start = (i * n2 + j) * n3
        return self._data[start:start + n3]

    def to_nested(self) -> list:
        n1, n2, n3 = self.dims
        return [[list(self.vector(i, j)) for j in range(n2)] for i in range(n1)]

    def __add__(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims:
            raise DimensionMismatch("tensor dims differ")
        return Tensor3(self.dims, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims:
            raise DimensionMismatch("tensor dims differ")
        return Tensor3(self.dims, [a - b for a, b in zip(self._data, other._data)])

    def is_zero(self) -> bool:
        return not any(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, self._data))
        return self._hash

    def __repr__(self) -> str:
        nz = [(i, j, k, format_rational(v))
              for (i, j, k), v in zip(_iproduct(*map(range, self.dims)), self._data) if v]
        return f"Tensor3({self.dims}, nonzero={nz})"


# ---------------------------------------------------------------- kernels

def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column indices."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r >= m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(m: Matrix) -> list[Matrix]:
    """Basis of ``{v : m v = 0}`` read off the reduced row echelon form.

    One vector per free column, with a 1 in that column, so the output is
    canonical for a given matrix.
    """
    a, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        basis.append(Matrix.column(v))
    return basis


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    """Exact inverse; raises :class:`SingularMatrix` when ``det(m) == 0``."""
    if not m.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    a, pivots = rref(m.hstack(Matrix.identity(n)))
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return Matrix.from_rows([row[n:] for row in a], n)


def solve_in_span(basis: Matrix, v: Matrix) -> Matrix | None:
    """Coordinates ``c`` with ``basis @ c == v``; ``None`` if ``v`` is outside the span.

    The columns of ``basis`` must be linearly independent.
    """
    aug = basis.hstack(v)
    a, pivots = rref(aug)
    k = basis.cols
    if k in pivots:
        return None
    coords = [Fraction(0)] * k
    for row, pc in enumerate(pivots):
        coords[pc] = a[row][k]
    return Matrix.column(coords)


def congruence_signature(m: Matrix) -> tuple[int, int, int]:
    """Inertia ``(positive, negative, zero)`` of a symmetric rational matrix.

    Uses simultaneous row/column elimination.  When the remaining diagonal
    vanishes but an off-diagonal entry ``a_ij`` does not, the hyperbolic pair
    ``(i, j)`` is folded by adding row/column ``j`` to ``i``, which puts
    ``2 a_ij`` on the diagonal.
    """
    if not m.is_square():
        raise NotSymmetric("signature needs a square matrix")
    if not m.is_symmetric():
        raise NotSymmetric("signature needs a symmetric matrix")
    n = m.rows
    a = m.to_rows()
    pos = neg = 0
    k = 0
    while k < n:
        p = next((i for i in range(k, n) if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            p = i
        if p != k:
            a[k], a[p] = a[p], a[k]
            for row in a:
                row[k], row[p] = row[p], row[k]
        piv = a[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg
