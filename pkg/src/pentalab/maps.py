"""Set-theoretical pentagon solutions built from a map ``rho`` on a group.

For a group ``M`` with a birational map ``rho`` the operations

    x . y = x y,        x * y = rho(x) rho(x y)^-1

give a transformation ``s(x, y) = (x . y, x * y)`` of ``M x M`` satisfying
``s23 s13 s12 = s12 s23``.  :class:`FactorizedSolution` takes
``rho(x) = (theta x)+^-1`` from a symmetric factorization;
:class:`GroupCaseSolution` is the degenerate control ``rho(x) = x^-1`` for
which ``x * y = y``.
"""

from __future__ import annotations

import random
from typing import Callable

from .errors import DomainError, ThetaNotUnipotent
from .factor import FactorizationContext, Theta
from .groups import Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model

__all__ = [
    "PentagonSolution",
    "FactorizedSolution",
    "GroupCaseSolution",
    "rho_closed",
    "j_closed",
    "k_closed",
    "star_closed_tri2",
    "odot_closed_tri2",
    "s12",
    "s13",
    "s23",
    "pentagon_sides",
    "first_coord",
    "PAIR_TEST_FUNCTIONS",
    "TRIPLE_TEST_FUNCTIONS",
    "pullback",
    "pullback_triple",
]

Pair = tuple[GroupElement, GroupElement]


def _div(num, den):
    if den == 0:
        raise DomainError("division by zero on the bad locus")
    return num / den


class PentagonSolution:
    """Operations derived from ``rho``; subclasses supply ``rho`` and ``rho_inv``."""

    model: GroupModel

    def rho(self, x: GroupElement) -> GroupElement:
        raise NotImplementedError

    def rho_inv(self, x: GroupElement) -> GroupElement:
        raise NotImplementedError

    def sample(self, rng: random.Random) -> GroupElement:
        """A random point of the carrier ``M``."""
        if isinstance(self.model, Block2NModel):
            return self.model.sample_plus(rng)
        return self.model.sample(rng)

    def dot(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return x * y

    def star(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.rho(x) * self.rho(x * y).inv()

    def s_map(self, x: GroupElement, y: GroupElement) -> Pair:
        return x * y, self.star(x, y)

    def s_inv(self, u: GroupElement, v: GroupElement) -> Pair:
        w = self.rho_inv(v * self.rho(u))
        return w, w.inv() * u

    def sigma(self, x: GroupElement, witness: GroupElement) -> GroupElement:
        """``rho(y)^-1 rho(rho(x) rho(x y)^-1)``; independent of the witness ``y``."""
        return self.rho(witness).inv() * self.rho(self.star(x, witness))

    def sbar(self, x: GroupElement, y: GroupElement) -> Pair:
        """``s21^-1``: swap, apply ``s^-1``, swap back."""
        u, v = self.s_inv(y, x)
        return v, u

    def odot(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.sbar(x, y)[0]

    def circledast(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.sbar(x, y)[1]

    def pullback_apply(self, f: Callable, x: GroupElement, y: GroupElement):
        """``(S f)(x, y) = f(s(x, y))``."""
        return f(*self.s_map(x, y))

    def check_prop1(self, x: GroupElement, y: GroupElement, z: GroupElement) -> bool:
        """The dot/star system plus constructive solvability of ``u.z = x, u*z = y``."""
        st = self.star
        xy = x * y
        assoc = xy * z == x * (y * z)
        second = st(x, y) * st(xy, z) == st(x, y * z)
        third = st(st(x, y), st(xy, z)) == st(y, z)
        u, w = self.s_inv(x, y)
        solvable = u * w == x and st(u, w) == y
        return assoc and second and third and solvable


class GroupCaseSolution(PentagonSolution):
    """``rho(x) = x^-1``, giving ``x * y = y`` on any group."""

    def __init__(self, model: GroupModel):
        self.model = model

    def rho(self, x):
        return x.inv()

    def rho_inv(self, x):
        return x.inv()


class FactorizedSolution(PentagonSolution):
    """``rho(x) = (theta x)+^-1`` on the plus subgroup.

    ``shift`` replaces ``rho`` by ``rho(x) a``, which yields the same star
    operation.
    """

    def __init__(self, ctx: FactorizationContext, shift: GroupElement | None = None):
        self.ctx = ctx
        self.model = ctx.model
        self.shift = shift
        self._theta_inv = ctx.theta.inverse

    @classmethod
    def of(cls, model: GroupModel, theta: Theta | None = None) -> "FactorizedSolution":
        return cls(FactorizationContext(model, theta))

    def __repr__(self):
        return f"FactorizedSolution({self.ctx!r})"

    @property
    def theta(self) -> Theta:
        return self.ctx.theta

    @property
    def theta_square_central(self) -> bool:
        return self.theta.square_central

    @property
    def theta_unipotent(self) -> bool:
        return self.theta.unipotent

    def with_shift(self, a: GroupElement) -> "FactorizedSolution":
        return FactorizedSolution(self.ctx, a)

    def _plus_of(self, m) -> GroupElement:
        return self.ctx.plus_element(self.ctx.plus(m))

    def rho(self, x):
        r = self._plus_of(self.ctx.theta_mul(x)).inv()
        return r if self.shift is None else r * self.shift

    def rho_inv(self, x):
        if self.shift is not None:
            x = x * self.shift.inv()
        return self._plus_of(self._theta_inv @ x.inv().to_matrix())

    def _require_unipotent(self):
        if not self.theta_unipotent:
            raise ThetaNotUnipotent(f"theta squared is not the identity for {self.theta.params}")

    def j(self, x):
        """``(theta x)+``, an involution when theta squares to one."""
        self._require_unipotent()
        return self._plus_of(self.ctx.theta_mul(x))

    def k(self, x):
        """``i j i``."""
        return self.j(x.inv()).inv()

    def k_alt(self, x):
        """``j i j``; agrees with :meth:`k`."""
        return self.j(self.j(x).inv())

    def odot_via_j(self, x, y):
        """``i j (j(y) i(x)) y``."""
        return self.j(self.j(y) * x.inv()).inv() * y

    def odot_via_k(self, x, y):
        """``k(k(x) k(y))``."""
        return self.k(self.k(x) * self.k(y))

    def sigma_closed(self, x):
        """``theta (theta x)- theta^-1`` mapped back to coordinates."""
        m = self.ctx.theta_conj(self.ctx.minus(self.ctx.theta_mul(x)))
        return self.ctx.plus_element(m)


# -- closed forms --------------------------------------------------------

def rho_closed(model: GroupModel, theta: Theta, x: GroupElement) -> GroupElement:
    """Coordinate formula for ``(theta x)+^-1`` on TRI2 and SL3S."""
    p = theta.params
    if isinstance(model, Tri2Model):
        b, c = p["b"], p["c"]
        x1, x2 = x.coords
        return GroupElement(model, (_div(-x2, b * x1), _div(1, c * x1)))
    if isinstance(model, SL3SModel):
        a, b = p["a"], p["b"]
        x0, x1, x2, x3 = x.coords
        x4 = model.x4(x)
        s1, _, s3 = model.si
        m = model.root_exponent
        if x2 == 0 or x4 == 0:
            raise DomainError("x2 * x4 vanishes")
        return GroupElement(model, (
            ((x2 / a) ** s3 * (x4 / b) ** s1) ** m,
            b * b / a * x0 ** model.sij(3, 2) * x1 / x4,
            a * b * x0 ** model.sij(3, 1) / x4,
            a * a / b * x0 ** model.sij(2, 1) * x3 / x2,
        ))
    raise NotImplementedError(f"no closed form for {model.kind}")


def _unipotent_b(theta: Theta):
    if not theta.unipotent:
        raise ThetaNotUnipotent(f"theta squared is not the identity for {theta.params}")
    return theta.params["b"]


def j_closed(model: GroupModel, theta: Theta, x: GroupElement) -> GroupElement:
    """``(theta x)+`` for unipotent theta on TRI2 and SL3S."""
    b = _unipotent_b(theta)
    if isinstance(model, Tri2Model):
        x1, x2 = x.coords
        return GroupElement(model, (_div(-b * x1, x2), _div(b * b, x2)))
    if isinstance(model, SL3SModel):
        return k_closed(model, theta, x.inv()).inv()
    raise NotImplementedError(f"no closed form for {model.kind}")


def k_closed(model: GroupModel, theta: Theta, x: GroupElement) -> GroupElement:
    b = _unipotent_b(theta)
    if isinstance(model, Tri2Model):
        x1, x2 = x.coords
        if x2 == 0:
            raise DomainError("k leaves the group where x2 = 0")
        # i j i at b*c = 1; reduces to (x2, x1) at b = 1
        return GroupElement(model, (x2 / b, b * x1))
    if isinstance(model, SL3SModel):
        x0, x1, x2, x3 = x.coords
        x4 = model.x4(x)
        s1, s2, s3 = model.si
        m = model.root_exponent
        if x2 == 0 or x4 == 0:
            raise DomainError("x2 * x4 vanishes")
        return GroupElement(model, (
            x0 * (b ** s2 * x2 ** s1 * x4 ** s3) ** m,
            -b * x1 / x2,
            b * b / x2,
            -b * x3 / x4,
        ))
    raise NotImplementedError(f"no closed form for {model.kind}")


def star_closed_tri2(x: GroupElement, y: GroupElement) -> GroupElement:
    """``(y1 x2 / (x1 y2 + x2), y2 / (x1 y2 + x2))``."""
    x1, x2 = x.coords
    y1, y2 = y.coords
    den = x1 * y2 + x2
    return GroupElement(x.model, (_div(y1 * x2, den), _div(y2, den)))


def odot_closed_tri2(x: GroupElement, y: GroupElement) -> GroupElement:
    """``(x2 y1 + x1, x2 y2)``; only a TRI2 element when ``x2 y2 != 0``."""
    x1, x2 = x.coords
    y1, y2 = y.coords
    if x2 * y2 == 0:
        raise DomainError("x2 * y2 vanishes")
    return GroupElement(x.model, (x2 * y1 + x1, x2 * y2))


# -- triples and pull-backs ---------------------------------------------

Triple = tuple[GroupElement, GroupElement, GroupElement]


def s12(sol: PentagonSolution, p: Triple) -> Triple:
    a, b = sol.s_map(p[0], p[1])
    return a, b, p[2]


def s13(sol: PentagonSolution, p: Triple) -> Triple:
    a, c = sol.s_map(p[0], p[2])
    return a, p[1], c


def s23(sol: PentagonSolution, p: Triple) -> Triple:
    b, c = sol.s_map(p[1], p[2])
    return p[0], b, c


def pentagon_sides(sol: PentagonSolution, x, y, z) -> tuple[Triple, Triple]:
    """``(s23 s13 s12 (p), s12 s23 (p))``."""
    p = (x, y, z)
    lhs = s23(sol, s13(sol, s12(sol, p)))
    rhs = s12(sol, s23(sol, p))
    return lhs, rhs


def first_coord(x: GroupElement):
    c = x.coords
    return c[0] if isinstance(c, tuple) else c[0, 0]


PAIR_TEST_FUNCTIONS: dict[str, Callable] = {
    "1": lambda x, y: 1,
    "x": lambda x, y: first_coord(x),
    "y": lambda x, y: first_coord(y),
    "x^2": lambda x, y: first_coord(x) ** 2,
    "xy": lambda x, y: first_coord(x) * first_coord(y),
    "y^2": lambda x, y: first_coord(y) ** 2,
}

TRIPLE_TEST_FUNCTIONS: dict[str, Callable] = {
    "x": lambda x, y, z: first_coord(x),
    "y": lambda x, y, z: first_coord(y),
    "z": lambda x, y, z: first_coord(z),
    "xy": lambda x, y, z: first_coord(x) * first_coord(y),
    "yz": lambda x, y, z: first_coord(y) * first_coord(z),
    "zx": lambda x, y, z: first_coord(z) * first_coord(x),
}


def pullback(sol: PentagonSolution) -> Callable:
    """The operator ``S``: ``f`` on pairs -> ``f o s``."""
    return lambda f: (lambda x, y: f(*sol.s_map(x, y)))


def pullback_triple(sol: PentagonSolution, which: str) -> Callable:
    """``S12``, ``S13`` or ``S23`` acting on functions of triples."""
    leg = {"12": s12, "13": s13, "23": s23}[which]
    return lambda f: (lambda x, y, z: f(*leg(sol, (x, y, z))))
