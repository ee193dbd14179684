"""Cartan matrices, the diagram involution tau and the Cartan subalgebra split.

Vertices are numbered from 1.  Explicit Cartan matrices are provided for the
simply laced families A_n, D_n and E_6 only; the other types are known to
:func:`tau` (trivial there) and :func:`h_decomposition_dims`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndexOutOfRange, UnsupportedType
from .linalg import RatMatrix

__all__ = ["DynkinType", "cartan_matrix", "tau", "h_decomposition_dims", "parse_type"]

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 3, "E": 6, "F": 4, "G": 2}
_FIXED_RANK = {"F": 4, "G": 2}

# chain 1-2-3-5-6 with vertex 4 attached to 3
_E6_EDGES = [(1, 2), (2, 3), (3, 4), (3, 5), (5, 6)]


@dataclass(frozen=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in _MIN_RANK:
            raise UnsupportedType(f"unknown family {self.family!r}")
        if self.rank < _MIN_RANK[fam]:
            raise UnsupportedType(f"{fam}{self.rank} is not a valid type")
        if fam in _FIXED_RANK and self.rank != _FIXED_RANK[fam]:
            raise UnsupportedType(f"{fam}{self.rank} is not a valid type")
        if fam == "E" and self.rank > 8:
            raise UnsupportedType(f"E{self.rank} is not a valid type")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def has_matrix(self) -> bool:
        return self.family in ("A", "D") or (self.family == "E" and self.rank == 6)


def parse_type(text: str) -> DynkinType:
    """``"A4"`` -> ``DynkinType("A", 4)``."""
    text = text.strip()
    if len(text) < 2 or not text[1:].isdigit():
        raise UnsupportedType(f"cannot parse Dynkin type {text!r}")
    return DynkinType(text[0], int(text[1:]))


def _edges(t: DynkinType) -> list[tuple[int, int]]:
    n = t.rank
    if t.family == "A":
        return [(i, i + 1) for i in range(1, n)]
    if t.family == "D":
        return [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    if t.family == "E" and n == 6:
        return list(_E6_EDGES)
    raise UnsupportedType(f"no Cartan matrix is tabulated for {t}")


def cartan_matrix(t: DynkinType) -> RatMatrix:
    n = t.rank
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in _edges(t):
        rows[a - 1][b - 1] = rows[b - 1][a - 1] = -1
    return RatMatrix.from_rows(rows)


def tau(t: DynkinType, i: int) -> int:
    """Vertex permutation induced by ``-w0`` on simple coroots."""
    n = t.rank
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"vertex {i} not in 1..{n}")
    if t.family == "A":
        return n + 1 - i
    if t.family == "D":
        return {n - 1: n, n: n - 1}.get(i, i)
    if t.family == "E" and n == 6:
        return {1: 6, 6: 1, 2: 5, 5: 2}.get(i, i)
    return i


def h_decomposition_dims(t: DynkinType) -> tuple[int, int]:
    """``(dim h0, dim h')``; ``h''`` has the same dimension as ``h'``."""
    n = t.rank
    if t.family == "A":
        return (0, n // 2) if n % 2 == 0 else (1, n // 2)
    if t.family == "D":
        return (n - 2, 1)
    if t.family == "E" and n == 6:
        return (2, 2)
    return (n, 0)
