"""Concrete coordinate group models.

Three models are provided, all realised inside matrix groups:

``TRI2``
    pairs ``(x1, x2)`` with ``x1 != 0`` standing for ``[[x1, x2], [0, 1]]``.
``SL3S``
    quadruples ``(x0, x1, x2, x3)`` with ``x0 != 0`` standing for an upper
    triangular 3x3 matrix whose diagonal is ``x0**s1, x0**s2, x0**s3``.
``BLOCK2N``
    invertible ``2N x 2N`` matrices, the ambient group GL(2N).

Coordinates are Fractions in everyday use.  Every formula here sticks to field
operations and integer powers, so the same code also runs over other exact
fields (see :mod:`pentalab.almost`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import InvalidModel, ModelMismatch, SamplingExhausted
from .linalg import RatMatrix, as_rational, block_join, block_split, mat_det

__all__ = [
    "GroupModel",
    "Tri2Model",
    "SL3SModel",
    "Block2NModel",
    "GroupElement",
    "mul",
    "inv",
    "identity",
    "sample",
    "to_matrix",
    "random_rational",
    "MAX_REJECTIONS",
]

MAX_REJECTIONS = 1000

ONE = Fraction(1)
ZERO = Fraction(0)


def random_rational(rng: random.Random, bound: int, nonzero: bool = False) -> Fraction:
    """Numerator in [-bound, bound], denominator in [1, bound]."""
    for _ in range(MAX_REJECTIONS):
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if not nonzero or value != 0:
            return value
    raise SamplingExhausted("could not draw a nonzero rational")


@dataclass(frozen=True)
class GroupElement:
    """An element of a :class:`GroupModel`.

    ``coords`` is a tuple for the coordinate models and a :class:`RatMatrix`
    for ``BLOCK2N``.
    """

    model: "GroupModel"
    coords: Any

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.model.mul(self, other)

    def inv(self) -> "GroupElement":
        return self.model.inv(self)

    def to_matrix(self) -> RatMatrix:
        return self.model.to_matrix(self)

    def is_identity(self) -> bool:
        return self == self.model.identity()

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        if isinstance(self.coords, RatMatrix):
            return f"{self.model.kind}{self.coords!r}"
        return f"{self.model.kind}({', '.join(str(c) for c in self.coords)})"


@dataclass(frozen=True)
class GroupModel:
    """Base class; subclasses fix the coordinate system."""

    sample_bound: int = field(default=10, compare=False)

    kind = "abstract"
    ambient_size = 0

    def element(self, coords) -> GroupElement:
        raise NotImplementedError

    def _check(self, x: GroupElement) -> None:
        if x.model != self:
            raise ModelMismatch(f"{x.model!r} is not {self!r}")

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        raise NotImplementedError

    def inv(self, x: GroupElement) -> GroupElement:
        raise NotImplementedError

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def to_matrix(self, x: GroupElement) -> RatMatrix:
        raise NotImplementedError

    def sample(self, rng: random.Random) -> GroupElement:
        raise NotImplementedError

    def rational(self, rng: random.Random, nonzero: bool = False) -> Fraction:
        return random_rational(rng, self.sample_bound, nonzero)


@dataclass(frozen=True)
class Tri2Model(GroupModel):
    """The affine group of the line, ``x = (x1, x2)`` <-> ``[[x1, x2], [0, 1]]``."""

    kind = "tri2"
    ambient_size = 2

    def element(self, coords) -> GroupElement:
        x1, x2 = (as_rational(c) for c in coords)
        if x1 == 0:
            raise InvalidModel("tri2 requires x1 != 0")
        return GroupElement(self, (x1, x2))

    def mul(self, x, y):
        self._check(x)
        self._check(y)
        x1, x2 = x.coords
        y1, y2 = y.coords
        return GroupElement(self, (x1 * y1, x1 * y2 + x2))

    def inv(self, x):
        self._check(x)
        x1, x2 = x.coords
        return GroupElement(self, (1 / x1, -x2 / x1))

    def identity(self):
        return GroupElement(self, (ONE, ZERO))

    def to_matrix(self, x):
        self._check(x)
        x1, x2 = x.coords
        return RatMatrix(2, 2, [x1, x2, ZERO, ONE])

    def sample(self, rng):
        return GroupElement(self, (self.rational(rng, nonzero=True), self.rational(rng)))


def _is_int(q: Fraction) -> bool:
    return Fraction(q).denominator == 1


@dataclass(frozen=True)
class SL3SModel(GroupModel):
    """Upper triangular 3x3 matrices with diagonal ``(x0**s1, x0**s2, x0**s3)``.

    Only integral exponent triples are accepted, so that every power that
    appears in the group law and in the factorization formulas is an integer
    power.  With ``s1 + s2 + s3 == 0`` this leaves the four triples
    ``(0, -1, 1)``, ``(1, -1, 0)``, ``(-1, 1, 0)`` and ``(0, 1, -1)``.
    """

    s: tuple = (Fraction(0), Fraction(-1), Fraction(1))

    kind = "sl3s"
    ambient_size = 3

    def __post_init__(self):
        s = tuple(as_rational(v) for v in self.s)
        object.__setattr__(self, "s", s)
        if len(s) != 3:
            raise InvalidModel("need three exponents")
        s1, s2, s3 = s
        if s1 + s2 + s3 != 0:
            raise InvalidModel("exponents must sum to zero")
        if s2 * (s3 - s1) == 0:
            raise InvalidModel("need s2*(s3 - s1) != 0")
        if not all(_is_int(v) for v in s):
            raise InvalidModel("only integral exponent triples are supported")
        if not _is_int(1 / (s2 * (s3 - s1))):
            raise InvalidModel("1/(s2*(s3 - s1)) must be an integer")

    def sij(self, i: int, j: int) -> int:
        """``s_i - s_j`` for 1-based indices."""
        return int(self.s[i - 1] - self.s[j - 1])

    @property
    def si(self) -> tuple[int, int, int]:
        return tuple(int(v) for v in self.s)

    @property
    def root_exponent(self) -> int:
        """The integer ``1/(s2*s31)``."""
        s1, s2, s3 = self.s
        return int(1 / (s2 * (s3 - s1)))

    def element(self, coords) -> GroupElement:
        c = tuple(as_rational(v) for v in coords)
        if len(c) != 4:
            raise InvalidModel("sl3s needs four coordinates")
        if c[0] == 0:
            raise InvalidModel("sl3s requires x0 != 0")
        return GroupElement(self, c)

    def mul(self, x, y):
        self._check(x)
        self._check(y)
        x0, x1, x2, x3 = x.coords
        y0, y1, y2, y3 = y.coords
        p21 = y0 ** self.sij(2, 1)
        return GroupElement(self, (
            x0 * y0,
            x1 * p21 + y1,
            x2 * y0 ** self.sij(3, 1) + y2 + x1 * y3 * p21,
            x3 * y0 ** self.sij(3, 2) + y3,
        ))

    @staticmethod
    def x4(x: GroupElement):
        """The auxiliary polynomial ``x1*x3 - x2``."""
        _, x1, x2, x3 = x.coords
        return x1 * x3 - x2

    def inv(self, x):
        self._check(x)
        x0, x1, x2, x3 = x.coords
        return GroupElement(self, (
            1 / x0,
            -(x0 ** self.sij(1, 2)) * x1,
            x0 ** self.sij(1, 3) * self.x4(x),
            -(x0 ** self.sij(2, 3)) * x3,
        ))

    def identity(self):
        return GroupElement(self, (ONE, ZERO, ZERO, ZERO))

    def to_matrix(self, x):
        self._check(x)
        x0, x1, x2, x3 = x.coords
        s1, s2, s3 = self.si
        d1, d2, d3 = x0 ** s1, x0 ** s2, x0 ** s3
        return RatMatrix(3, 3, [
            d1, d1 * x1, d1 * x2,
            ZERO, d2, d2 * x3,
            ZERO, ZERO, d3,
        ])

    def minus_matrix(self, y) -> RatMatrix:
        """Lower triangular member of the opposite subgroup with coordinates ``y``."""
        y0, y1, y2, y3 = (as_rational(v) for v in y)
        s1, s2, s3 = self.si
        e1, e2, e3 = y0 ** s1, y0 ** s2, y0 ** s3
        return RatMatrix(3, 3, [
            e3, ZERO, ZERO,
            e2 * y3, e2, ZERO,
            e1 * y2, e1 * y1, e1,
        ])

    def sample(self, rng):
        return GroupElement(self, (
            self.rational(rng, nonzero=True),
            self.rational(rng), self.rational(rng), self.rational(rng),
        ))


@dataclass(frozen=True)
class Block2NModel(GroupModel):
    """GL(2N) over the rationals, elements stored as full matrices."""

    n: int = 1

    kind = "block2n"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidModel("block size N must be >= 1")

    @property
    def ambient_size(self) -> int:
        return 2 * self.n

    def element(self, coords) -> GroupElement:
        m = coords if isinstance(coords, RatMatrix) else RatMatrix.from_rows(coords)
        if m.shape != (2 * self.n, 2 * self.n):
            raise InvalidModel(f"block2n with N={self.n} needs a {2 * self.n}x{2 * self.n} matrix")
        if mat_det(m) == 0:
            raise InvalidModel("block2n element must be invertible")
        return GroupElement(self, m)

    def mul(self, x, y):
        self._check(x)
        self._check(y)
        return GroupElement(self, x.coords @ y.coords)

    def inv(self, x):
        self._check(x)
        return GroupElement(self, x.coords.inv())

    def identity(self):
        return GroupElement(self, RatMatrix.identity(2 * self.n))

    def to_matrix(self, x):
        self._check(x)
        return x.coords

    def random_matrix(self, rng: random.Random, size: int | None = None) -> RatMatrix:
        size = 2 * self.n if size is None else size
        for _ in range(MAX_REJECTIONS):
            m = RatMatrix(size, size, [self.rational(rng) for _ in range(size * size)])
            if mat_det(m) != 0:
                return m
        raise SamplingExhausted("could not draw an invertible matrix")

    def sample(self, rng):
        return GroupElement(self, self.random_matrix(rng))

    def sample_plus(self, rng) -> GroupElement:
        """A random element of the subgroup ``[[A, B], [0, 1]]``."""
        n = self.n
        a = self.random_matrix(rng, n)
        b = RatMatrix(n, n, [self.rational(rng) for _ in range(n * n)])
        return GroupElement(self, block_join(a, b, RatMatrix.zeros(n), RatMatrix.identity(n)))

    def is_plus(self, m: RatMatrix) -> bool:
        _, _, g21, g22 = block_split(m, self.n)
        return g21 == RatMatrix.zeros(self.n) and g22.is_identity()


def mul(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.model != y.model:
        raise ModelMismatch(f"{x.model!r} vs {y.model!r}")
    return x.model.mul(x, y)


def inv(x: GroupElement) -> GroupElement:
    return x.model.inv(x)


def identity(model: GroupModel) -> GroupElement:
    return model.identity()


def sample(model: GroupModel, rng: random.Random) -> GroupElement:
    return model.sample(rng)


def to_matrix(x: GroupElement) -> RatMatrix:
    return x.model.to_matrix(x)
