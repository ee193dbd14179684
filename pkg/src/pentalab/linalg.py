"""Exact rational scalars and small dense matrices.

Scalars are :class:`fractions.Fraction`, which is always kept in lowest terms
with a positive denominator.  Matrix entries may also be elements of any other
exact field that supports ``+ - * /`` and comparison with zero (the
almost-group module feeds in rational functions of one variable); the
fraction-free integer kernels are used only when every entry is a Fraction.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch, Singular

__all__ = [
    "Rational",
    "RatMatrix",
    "as_rational",
    "parse_rational",
    "format_rational",
    "mat_mul",
    "mat_inv",
    "mat_det",
    "block_split",
    "block_join",
]

Rational = Fraction

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; pass other field elements through."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or ``"-p/q"``; no spaces or decimals."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _is_zero(value) -> bool:
    return value == 0


class RatMatrix:
    """Immutable dense matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_rational(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{len(entries)} entries do not fill a {rows}x{cols} matrix"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    def __reduce__(self):
        return (RatMatrix, (self.rows, self.cols, self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        zero = Fraction(0)
        return cls(n, n, [values[i] if i == j else zero for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def map(self, func) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [func(e) for e in self.entries])

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "RatMatrix":
        return RatMatrix(
            r1 - r0, c1 - c0,
            [self[i, j] for i in range(r0, r1) for j in range(c0, c1)],
        )

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rows, self.cols, self.entries)))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RatMatrix([{body}])"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RatMatrix":
        return self.map(lambda e: -e)

    def scale(self, factor) -> "RatMatrix":
        return self.map(lambda e: e * factor)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def inv(self) -> "RatMatrix":
        return mat_inv(self)

    def det(self):
        return mat_det(self)

    def is_identity(self) -> bool:
        return self.is_square and self == RatMatrix.identity(self.rows)


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    n, m, p = a.rows, a.cols, b.cols
    ae, be = a.entries, b.entries
    out = []
    for i in range(n):
        arow = ae[i * m:(i + 1) * m]
        for j in range(p):
            acc = 0
            for k in range(m):
                x = arow[k]
                if x:
                    acc = acc + x * be[k * p + j]
            out.append(acc)
    return RatMatrix(n, p, out)


def _all_fractions(a: RatMatrix) -> bool:
    return all(isinstance(e, Fraction) for e in a.entries)


def _integer_rows(a: RatMatrix) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators."""
    rows, scales = [], []
    for i in range(a.rows):
        row = a.row(i)
        d = reduce(lcm, (e.denominator for e in row), 1)
        rows.append([e.numerator * (d // e.denominator) for e in row])
        scales.append(d)
    return rows, scales


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    m = [r[:] for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        p = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (p * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = p
    return sign * m[n - 1][n - 1] if n else 1


def _generic_det(a: RatMatrix):
    n = a.rows
    m = a.to_rows()
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if not _is_zero(m[r][k])), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        p = m[k][k]
        det = det * p
        for i in range(k + 1, n):
            f = m[i][k] / p
            if not _is_zero(f):
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


def mat_det(a: RatMatrix):
    """Exact determinant (fraction-free Bareiss elimination for rational input)."""
    if not a.is_square:
        raise DimensionMismatch(f"determinant of non-square {a.shape} matrix")
    if not _all_fractions(a):
        return _generic_det(a)
    rows, scales = _integer_rows(a)
    return Fraction(_bareiss_det(rows), reduce(lambda x, y: x * y, scales, 1))


def _bareiss_inverse(m: list[list[int]]) -> tuple[int, list[list[int]]]:
    """Fraction-free Gauss-Jordan on [m | I].

    Returns ``(d, B)`` with ``m @ B == d * I`` and ``d == +-det(m)``; every
    intermediate quotient is exact.
    """
    n = len(m)
    aug = [r[:] + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for r in range(k + 1, n):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise Singular("matrix is singular")
        p = aug[k][k]
        row_k = aug[k]
        for i in range(n):
            if i == k:
                continue
            row_i = aug[i]
            mik = row_i[k]
            for j in range(2 * n):
                if j == k:
                    continue
                q, r = divmod(p * row_i[j] - mik * row_k[j], prev)
                assert r == 0, "fraction-free step was not exact"
                row_i[j] = q
            row_i[k] = 0
        prev = p
    return prev, [row[n:] for row in aug]


def _generic_inverse(a: RatMatrix) -> RatMatrix:
    n = a.rows
    aug = [list(a.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((r for r in range(k, n) if not _is_zero(aug[r][k])), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        p = aug[k][k]
        aug[k] = [x / p for x in aug[k]]
        for i in range(n):
            if i != k and not _is_zero(aug[i][k]):
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return RatMatrix(n, n, [e for row in aug for e in row[n:]])


def mat_inv(a: RatMatrix) -> RatMatrix:
    """Exact inverse; raises :class:`Singular` when the determinant vanishes."""
    if not a.is_square:
        raise DimensionMismatch(f"inverse of non-square {a.shape} matrix")
    n = a.rows
    if not _all_fractions(a):
        return _generic_inverse(a)
    rows, scales = _integer_rows(a)
    d, adj = _bareiss_inverse(rows)
    # (D a)^-1 = a^-1 D^-1, so a^-1 = (D a)^-1 D
    return RatMatrix(n, n, [Fraction(adj[i][j] * scales[j], d) for i in range(n) for j in range(n)])


def block_split(a: RatMatrix, n: int) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
    """Split a 2n x 2n matrix into its (11, 12, 21, 22) n x n blocks."""
    if a.shape != (2 * n, 2 * n):
        raise DimensionMismatch(f"{a.shape} is not {2 * n}x{2 * n}")
    return (
        a.submatrix(0, n, 0, n),
        a.submatrix(0, n, n, 2 * n),
        a.submatrix(n, 2 * n, 0, n),
        a.submatrix(n, 2 * n, n, 2 * n),
    )


def block_join(g11: RatMatrix, g12: RatMatrix, g21: RatMatrix, g22: RatMatrix) -> RatMatrix:
    n = g11.rows
    for blk in (g11, g12, g21, g22):
        if blk.shape != (n, n):
            raise DimensionMismatch("blocks must all be n x n")
    rows = [list(g11.row(i)) + list(g12.row(i)) for i in range(n)]
    rows += [list(g21.row(i)) + list(g22.row(i)) for i in range(n)]
    return RatMatrix.from_rows(rows)
