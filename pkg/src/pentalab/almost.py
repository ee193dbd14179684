"""The "almost a group" ``(M x M) u {theta}`` built from an involutive ``j``.

Multiplication table (``k = i j i``)::

    (x1, x2)(y1, y2) = (x1 j(x2 j(y1)), k(k(x2) y1) y2)
    theta (x1, x2)   = (j(x1), k(x1) x2)
    (x1, x2) theta   = (x1 j(x2), k(x2))
    theta theta      = (1, 1)

The unit ``(1, 1)`` sits on the boundary of the domain of ``j``: ``j(1)`` is
never defined.  Identities whose literal evaluation passes through ``j(1)``
are evaluated along a rational curve ``e(t)`` through the unit, with
coordinates in the field Q(t), and the value at ``t = 0`` is read off after
all cancellations.  Elements are also realised in the ambient matrix group by
``(x1, x2) -> x1 theta x2 theta^-1`` and ``theta -> theta``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from sympy import QQ, symbols

from .errors import DomainError, InvalidModel
from .groups import GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import RatMatrix
from .maps import FactorizedSolution, j_closed, k_closed

__all__ = ["AlmostGroupElement", "THETA", "AlmostGroup", "CurveField"]


@dataclass(frozen=True)
class AlmostGroupElement:
    """Either a pair of base elements or the adjoined symbol ``theta``."""

    pair: tuple[GroupElement, GroupElement] | None = None

    def __post_init__(self):
        if self.pair is not None:
            x1, x2 = self.pair
            if x1.model != x2.model:
                raise InvalidModel("pair components must share one base model")

    @property
    def is_theta(self) -> bool:
        return self.pair is None

    def __repr__(self):
        if self.is_theta:
            return "THETA"
        return f"({self.pair[0]!r}, {self.pair[1]!r})"


THETA = AlmostGroupElement(None)


class CurveField:
    """Rational functions in one variable ``t`` over Q, evaluated at ``t = 0``."""

    def __init__(self):
        self.field = QQ.frac_field(symbols("t"))
        self.t = self.field.gens[0]

    def at_zero(self, value) -> Fraction:
        if isinstance(value, (Fraction, int)):
            return Fraction(value)
        num, den = value.numer, value.denom
        d0 = den.coeff(1)
        if d0 == 0:
            raise DomainError("value has a pole at t = 0")
        n0 = num.coeff(1)
        return Fraction(int(n0.numerator), int(n0.denominator)) / Fraction(
            int(d0.numerator), int(d0.denominator)
        )

    def element_at_zero(self, x: GroupElement) -> GroupElement:
        return GroupElement(x.model, tuple(self.at_zero(c) for c in x.coords))

    def matrix_at_zero(self, m: RatMatrix) -> RatMatrix:
        return RatMatrix(m.rows, m.cols, [self.at_zero(e) for e in m.entries])


class AlmostGroup:
    """Almost-group over a base solution whose theta squares to the identity.

    ``closed_forms`` selects the coordinate formulas for ``j`` and ``k``
    (TRI2 and SL3S only); otherwise they are computed by factorization.
    """

    def __init__(self, solution: FactorizedSolution, closed_forms: bool = True):
        if not solution.theta_unipotent:
            solution._require_unipotent()
        self.solution = solution
        self.model: GroupModel = solution.model
        self.theta_matrix = solution.theta.matrix
        if closed_forms and isinstance(self.model, (Tri2Model, SL3SModel)):
            theta = solution.theta
            self.j: Callable = lambda x: j_closed(self.model, theta, x)
            self.k: Callable = lambda x: k_closed(self.model, theta, x)
        else:
            self.j = solution.j
            self.k = solution.k
        self._curve: CurveField | None = None

    @property
    def curve(self) -> CurveField:
        if self._curve is None:
            self._curve = CurveField()
        return self._curve

    def pair(self, x1: GroupElement, x2: GroupElement) -> AlmostGroupElement:
        return AlmostGroupElement((x1, x2))

    @property
    def unit(self) -> AlmostGroupElement:
        one = self.model.identity()
        return self.pair(one, one)

    def mul(self, p: AlmostGroupElement, q: AlmostGroupElement) -> AlmostGroupElement:
        j, k = self.j, self.k
        if p.is_theta and q.is_theta:
            return self.unit
        if p.is_theta:
            x1, x2 = q.pair
            return self.pair(j(x1), k(x1) * x2)
        if q.is_theta:
            x1, x2 = p.pair
            return self.pair(x1 * j(x2), k(x2))
        (x1, x2), (y1, y2) = p.pair, q.pair
        return self.pair(x1 * j(x2 * j(y1)), k(k(x2) * y1) * y2)

    def inv(self, p: AlmostGroupElement) -> AlmostGroupElement:
        if p.is_theta:
            return THETA
        x1, x2 = p.pair
        j, k = self.j, self.k
        return self.pair(k(k(x1) * x2).inv(), j(x1 * j(x2)).inv())

    def realize(self, p: AlmostGroupElement) -> RatMatrix:
        """Image in the ambient matrix group."""
        th = self.theta_matrix
        if p.is_theta:
            return th
        x1, x2 = p.pair
        return x1.to_matrix() @ th @ x2.to_matrix() @ th

    # -- evaluation through the unit ------------------------------------

    def unit_curve(self, rng: random.Random) -> GroupElement:
        """``e(t) = 1 + t v`` for a random direction ``v``; ``e(0)`` is the unit."""
        cf = self.curve
        t = cf.t
        one = self.model.identity()
        coords = []
        for c in one.coords:
            v = self.model.rational(rng, nonzero=True)
            coords.append(c + t * v)
        return GroupElement(self.model, tuple(coords))

    def pair_at_zero(self, p: AlmostGroupElement) -> AlmostGroupElement:
        if p.is_theta:
            return p
        cf = self.curve
        return self.pair(*(cf.element_at_zero(x) for x in p.pair))

    def realize_at_zero(self, p: AlmostGroupElement) -> RatMatrix:
        return self.curve.matrix_at_zero(self.realize(p))
