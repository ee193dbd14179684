"""Symmetric factorization ``g = g+ g-^-1 = gb-^-1 gb+`` and conjugating elements.

Each group model has an ambient matrix group ``G`` with two subgroups:

* ``BLOCK2N`` (and ``TRI2`` as the N=1 case): ``G = GL(2N)``,
  ``G+ = [[A, B], [0, 1]]`` and ``G- = [[1, 0], [C, D]]``.
* ``SL3S``: ``G = SL(3)``, ``G+`` upper triangular with diagonal
  ``(x0**s1, x0**s2, x0**s3)`` and ``G-`` lower triangular with diagonal
  ``(y0**s3, y0**s2, y0**s1)``.

The plus/minus parts are returned as matrices; :meth:`Splitting.plus_element`
turns a ``G+`` matrix back into model coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import DomainError, InvalidModel, NotFactorizable, Singular
from .groups import Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import RatMatrix, as_rational, block_join, block_split, mat_det

__all__ = [
    "Splitting",
    "BlockSplitting",
    "SL3Splitting",
    "splitting_for",
    "Theta",
    "Factorization",
    "FactorizationContext",
    "plus_membership",
    "minus_membership",
    "factor",
    "normalize_theta",
]


def _nonsingular_inv(m: RatMatrix, what: str) -> RatMatrix:
    try:
        return m.inv()
    except Singular:
        raise NotFactorizable(f"{what} is singular") from None


class Splitting:
    """Plus/minus decomposition of the ambient matrix group of a model."""

    model: GroupModel

    def is_plus(self, g: RatMatrix) -> bool:
        raise NotImplementedError

    def is_minus(self, g: RatMatrix) -> bool:
        raise NotImplementedError

    def left(self, g: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
        """``(g+, g-)`` with ``g == g+ @ g-^-1``."""
        raise NotImplementedError

    def right(self, g: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
        """``(gb+, gb-)`` with ``g == gb-^-1 @ gb+``.

        Default route: factor ``g^-1 = h+ h-^-1`` so ``gb+ = h+^-1``, ``gb- = h-^-1``.
        """
        hp, hm = self.left(_nonsingular_inv(g, "g"))
        return hp.inv(), hm.inv()

    def plus_element(self, g: RatMatrix) -> GroupElement:
        """Model coordinates of a matrix known to lie in ``G+``."""
        raise NotImplementedError

    def ambient(self, x: GroupElement) -> RatMatrix:
        return x.model.to_matrix(x)


@dataclass(frozen=True)
class BlockSplitting(Splitting):
    model: GroupModel
    n: int = 1

    def is_plus(self, g):
        if g.shape != (2 * self.n, 2 * self.n):
            return False
        g11, _, g21, g22 = block_split(g, self.n)
        return g21 == RatMatrix.zeros(self.n) and g22.is_identity() and mat_det(g11) != 0

    def is_minus(self, g):
        if g.shape != (2 * self.n, 2 * self.n):
            return False
        g11, g12, _, g22 = block_split(g, self.n)
        return g12 == RatMatrix.zeros(self.n) and g11.is_identity() and mat_det(g22) != 0

    def left(self, g):
        n = self.n
        g11, g12, g21, g22 = block_split(g, n)
        g22i = _nonsingular_inv(g22, "g22 block")
        one, zero = RatMatrix.identity(n), RatMatrix.zeros(n)
        schur = g11 - g12 @ g22i @ g21
        if mat_det(schur) == 0:
            raise NotFactorizable("element is singular")
        gp = block_join(schur, g12 @ g22i, zero, one)
        gm = block_join(one, zero, -(g22i @ g21), g22i)
        return gp, gm

    def right(self, g):
        n = self.n
        g11, g12, g21, g22 = block_split(g, n)
        g11i = _nonsingular_inv(g11, "g11 block")
        one, zero = RatMatrix.identity(n), RatMatrix.zeros(n)
        schur = g22 - g21 @ g11i @ g12
        gbm_inv = block_join(one, zero, g21 @ g11i, schur)
        gbm = _nonsingular_inv(gbm_inv, "element")
        gbp = block_join(g11, g12, zero, one)
        return gbp, gbm

    def plus_element(self, g):
        if isinstance(self.model, Tri2Model):
            return GroupElement(self.model, (g[0, 0], g[0, 1]))
        return GroupElement(self.model, g)


@dataclass(frozen=True)
class SL3Splitting(Splitting):
    """Triangular factorization of SL(3) read off from minors of ``g`` and ``g^-1``."""

    model: SL3SModel

    def _diag_ok(self, d, exps) -> bool:
        d1, d2, d3 = d
        if d2 == 0:
            return False
        x0 = d2 ** int(self.model.s[1])
        return d1 == x0 ** exps[0] and d3 == x0 ** exps[2]

    def is_plus(self, g):
        if g.shape != (3, 3) or any(g[i, j] != 0 for i in range(3) for j in range(i)):
            return False
        s1, s2, s3 = self.model.si
        return self._diag_ok((g[0, 0], g[1, 1], g[2, 2]), (s1, s2, s3))

    def is_minus(self, g):
        if g.shape != (3, 3) or any(g[i, j] != 0 for i in range(3) for j in range(i + 1, 3)):
            return False
        s1, s2, s3 = self.model.si
        return self._diag_ok((g[0, 0], g[1, 1], g[2, 2]), (s3, s2, s1))

    def plus_coords(self, g: RatMatrix) -> tuple:
        s2 = self.model.si[1]
        x0 = g[1, 1] ** s2
        return (x0, g[0, 1] / g[0, 0], g[0, 2] / g[0, 0], g[1, 2] / g[1, 1])

    def minus_coords(self, g: RatMatrix) -> tuple:
        s2 = self.model.si[1]
        y0 = g[1, 1] ** s2
        return (y0, g[2, 1] / g[2, 2], g[2, 0] / g[2, 2], g[1, 0] / g[1, 1])

    def left(self, g):
        if g.shape != (3, 3):
            raise NotFactorizable("sl3s ambient elements are 3x3")
        if mat_det(g) != 1:
            raise NotFactorizable("element is not in SL(3)")
        g33 = g[2, 2]
        if g33 == 0:
            raise NotFactorizable("g33 vanishes")
        gbar = g.inv()
        b11 = gbar[0, 0]
        if b11 == 0:
            raise NotFactorizable("(g^-1)11 vanishes")
        s1, _, s3 = self.model.si
        m = self.model.root_exponent
        model = self.model
        # coordinates of (g+)^-1 and (g-)^-1
        plus_inv = (
            (b11 ** s1 * g33 ** s3) ** m,
            gbar[0, 1] / b11,
            gbar[0, 2] / b11,
            -g[1, 2] / g33,
        )
        minus_inv = (
            (b11 ** s3 * g33 ** s1) ** m,
            g[2, 1] / g33,
            g[2, 0] / g33,
            -gbar[1, 0] / b11,
        )
        gp = model.to_matrix(model.inv(GroupElement(model, plus_inv)))
        gm = model.minus_matrix(minus_inv).inv()
        return gp, gm

    def plus_element(self, g):
        return GroupElement(self.model, self.plus_coords(g))


def splitting_for(model: GroupModel) -> Splitting:
    if isinstance(model, Tri2Model):
        return BlockSplitting(model, 1)
    if isinstance(model, Block2NModel):
        return BlockSplitting(model, model.n)
    if isinstance(model, SL3SModel):
        return SL3Splitting(model)
    raise InvalidModel(f"no splitting for {model!r}")


def _ambient(g) -> RatMatrix:
    return g.to_matrix() if isinstance(g, GroupElement) else g


def plus_membership(g, model: GroupModel | None = None) -> bool:
    model = g.model if model is None else model
    return splitting_for(model).is_plus(_ambient(g))


def minus_membership(g, model: GroupModel | None = None) -> bool:
    model = g.model if model is None else model
    return splitting_for(model).is_minus(_ambient(g))


@dataclass(frozen=True)
class Factorization:
    """The four parts of ``g = gp gm^-1 = gbm^-1 gbp`` as ambient matrices."""

    gp: RatMatrix
    gm: RatMatrix
    gbp: RatMatrix
    gbm: RatMatrix

    def reassemble_left(self) -> RatMatrix:
        return self.gp @ self.gm.inv()

    def reassemble_right(self) -> RatMatrix:
        return self.gbm.inv() @ self.gbp


def factor(g, model: GroupModel | None = None) -> Factorization:
    """Both factorizations of an ambient element (matrix or GroupElement)."""
    model = g.model if model is None else model
    sp = splitting_for(model)
    m = _ambient(g)
    gp, gm = sp.left(m)
    gbp, gbm = sp.right(m)
    return Factorization(gp, gm, gbp, gbm)


def _scalar_block(value, n: int) -> RatMatrix:
    if isinstance(value, RatMatrix):
        return value
    return RatMatrix.identity(n).scale(as_rational(value))


@dataclass(frozen=True)
class Theta:
    """A conjugating element together with the parameters it was built from."""

    model: GroupModel
    matrix: RatMatrix
    params: Mapping = field(default_factory=dict, compare=False)

    @classmethod
    def tri2(cls, model: Tri2Model, b=1, c=1) -> "Theta":
        b, c = as_rational(b), as_rational(c)
        if b * c == 0:
            raise InvalidModel("theta needs b*c != 0")
        zero = Fraction(0)
        return cls(model, RatMatrix(2, 2, [zero, b, c, zero]), {"b": b, "c": c})

    @classmethod
    def sl3s(cls, model: SL3SModel, a=1, b=1) -> "Theta":
        a, b = as_rational(a), as_rational(b)
        if a == 0 or b == 0:
            raise InvalidModel("theta needs a, b != 0")
        z = Fraction(0)
        return cls(model, RatMatrix(3, 3, [z, z, b, z, -a / b, z, 1 / a, z, z]), {"a": a, "b": b})

    @classmethod
    def block2n(cls, model: Block2NModel, b=1, c=None) -> "Theta":
        """``[[0, b], [c, 0]]``; ``c`` defaults to ``b^-1``. Scalars mean multiples of 1."""
        n = model.n
        bm = _scalar_block(b, n)
        if mat_det(bm) == 0:
            raise InvalidModel("b must be invertible")
        cm = bm.inv() if c is None else _scalar_block(c, n)
        if mat_det(cm) == 0:
            raise InvalidModel("c must be invertible")
        zero = RatMatrix.zeros(n)
        return cls(model, block_join(zero, bm, cm, zero), {"b": bm, "c": cm})

    @classmethod
    def default(cls, model: GroupModel) -> "Theta":
        if isinstance(model, Tri2Model):
            return cls.tri2(model)
        if isinstance(model, SL3SModel):
            return cls.sl3s(model)
        return cls.block2n(model)

    @property
    def square(self) -> RatMatrix:
        return self.matrix @ self.matrix

    @property
    def square_central(self) -> bool:
        sq = self.square
        return sq == RatMatrix.identity(sq.rows).scale(sq[0, 0])

    @property
    def unipotent(self) -> bool:
        """True when theta squares to the identity."""
        return self.square.is_identity()

    @property
    def inverse(self) -> RatMatrix:
        return self.matrix.inv()


class FactorizationContext:
    """A group model, its splitting and a conjugating element."""

    def __init__(self, model: GroupModel, theta: Theta | None = None):
        self.model = model
        self.theta = Theta.default(model) if theta is None else theta
        if self.theta.model != model:
            raise InvalidModel("theta belongs to another model")
        self.splitting = splitting_for(model)
        self._theta_inv = self.theta.inverse

    def __repr__(self):
        return f"FactorizationContext({self.model!r}, {dict(self.theta.params)!r})"

    def ambient(self, g) -> RatMatrix:
        return _ambient(g)

    def theta_mul(self, g) -> RatMatrix:
        return self.theta.matrix @ _ambient(g)

    def mul_theta(self, g) -> RatMatrix:
        return _ambient(g) @ self.theta.matrix

    def theta_conj(self, g) -> RatMatrix:
        """``theta g theta^-1``."""
        return self.theta.matrix @ _ambient(g) @ self._theta_inv

    def theta_inv_conj(self, g) -> RatMatrix:
        return self._theta_inv @ _ambient(g) @ self.theta.matrix

    def factor(self, g) -> Factorization:
        return factor(_ambient(g), self.model)

    def plus(self, g) -> RatMatrix:
        return self.splitting.left(_ambient(g))[0]

    def minus(self, g) -> RatMatrix:
        return self.splitting.left(_ambient(g))[1]

    def plus_element(self, g) -> GroupElement:
        return self.splitting.plus_element(g)

    def normalize_theta(self) -> Theta:
        """``(theta^2)+^-1 theta``, which squares to the identity."""
        sq_plus = self.plus(self.theta.square)
        matrix = sq_plus.inv() @ self.theta.matrix
        params = dict(self.theta.params)
        params["normalized"] = True
        return Theta(self.model, matrix, params)

    def normalized(self) -> "FactorizationContext":
        return FactorizationContext(self.model, self.normalize_theta())

    def lemma1_check(self, g) -> bool:
        """``(theta g^-1 theta^-1)+- == theta g-+ theta^-1`` for an ambient ``g``."""
        m = _ambient(g)
        gp, gm = self.splitting.left(m)
        try:
            conj = self.theta_conj(m.inv())
        except Singular:
            raise DomainError("element is singular") from None
        cp, cm = self.splitting.left(conj)
        return cp == self.theta_conj(gm) and cm == self.theta_conj(gp)


def normalize_theta(theta: Theta) -> Theta:
    return FactorizationContext(theta.model, theta).normalize_theta()
