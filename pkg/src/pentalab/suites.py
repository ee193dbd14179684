"""Seeded, sharded verification of the identities satisfied by a solution.

Each check draws random points, evaluates an identity exactly and classifies
the sample as passed, failed or rejected (a :class:`DomainError` somewhere in
the evaluation).  Failures are either ``identity`` failures, where an identity
itself is violated, or ``route`` failures, where two ways of computing the
same map disagree.

A run is described by a list of :class:`Config` objects (model plus theta)
and produces JSON-serialisable report lines, one per check and configuration,
followed by a summary line.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .almost import THETA, AlmostGroup, AlmostGroupElement
from .errors import (
    DomainError,
    InvalidModel,
    RejectionRateExceeded,
    SamplingExhausted,
    ThetaNotUnipotent,
)
from .factor import FactorizationContext, Theta, factor, minus_membership, plus_membership
from .groups import MAX_REJECTIONS, Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import RatMatrix, block_join
from .maps import (
    PAIR_TEST_FUNCTIONS,
    TRIPLE_TEST_FUNCTIONS,
    FactorizedSolution,
    GroupCaseSolution,
    j_closed,
    k_closed,
    odot_closed_tri2,
    pentagon_sides,
    pullback,
    pullback_triple,
    rho_closed,
    star_closed_tri2,
)
from .serialize import almost_to_json, element_to_json, matrix_to_json, model_to_json, theta_to_json

__all__ = [
    "SUITES",
    "Config",
    "Check",
    "CHECKS",
    "checks_for",
    "run_check",
    "run_verify",
    "acceptance_configs",
    "MAX_REJECTION_RATE",
    "MIN_DRAWS_FOR_RATE",
]

SUITES = (
    "pentagon", "prop1", "factorization", "lemma1", "s3",
    "jot", "odot", "almostgroup", "pullback", "sigma",
)

MAX_REJECTION_RATE = 0.5
# the rate is only judged once this many draws have been made
MIN_DRAWS_FOR_RATE = 20
MAX_STORED_FAILURES = 20

IDENTITY = "identity"
ROUTE = "route"


@dataclass(frozen=True)
class Config:
    model: GroupModel
    theta: Theta

    @classmethod
    def of(cls, model: GroupModel, theta: Theta | None = None) -> "Config":
        return cls(model, Theta.default(model) if theta is None else theta)

    @property
    def key(self) -> str:
        parts = []
        for k, v in sorted(theta_to_json(self.theta).items()):
            if isinstance(v, list):
                v = ";".join(v)
            if not isinstance(v, dict):
                parts.append(f"{k}={v}")
        return ",".join(parts)


def acceptance_configs() -> list[Config]:
    """The five configurations the default verification run covers."""
    tri2, sl3 = Tri2Model(), SL3SModel()
    b1, b2 = Block2NModel(n=1), Block2NModel(n=2)
    return [
        Config(tri2, Theta.tri2(tri2, -1, 1)),
        Config(tri2, Theta.tri2(tri2, 2, "1/2")),
        Config(sl3, Theta.sl3s(sl3, 1, 1)),
        Config.of(b1),
        Config.of(b2),
    ]


class Env:
    """Per-configuration state shared by the checks of one worker."""

    def __init__(self, config: Config):
        self.config = config
        self.model = config.model
        self.ctx = FactorizationContext(config.model, config.theta)
        self.sol = FactorizedSolution(self.ctx)
        self._almost: AlmostGroup | None = None

    @property
    def almost(self) -> AlmostGroup:
        if self._almost is None:
            self._almost = AlmostGroup(self.sol)
        return self._almost

    def x(self, rng) -> GroupElement:
        return self.sol.sample(rng)

    def xs(self, rng, n: int) -> list[GroupElement]:
        return [self.sol.sample(rng) for _ in range(n)]


# -- requirements --------------------------------------------------------

def _unipotent(env: Env) -> str | None:
    return None if env.sol.theta_unipotent else "theta squared is not the identity"


def _central(env: Env) -> str | None:
    return None if env.sol.theta_square_central else "theta squared is not central"


def _closed(env: Env) -> str | None:
    if isinstance(env.model, (Tri2Model, SL3SModel)):
        return None
    return "no closed form for this model"


def _tri2_c1(env: Env) -> str | None:
    if isinstance(env.model, Tri2Model) and env.config.theta.params["c"] == 1:
        return None
    return "closed form stated for tri2 with c = 1 only"


def _coordinate_base(env: Env) -> str | None:
    if isinstance(env.model, (Tri2Model, SL3SModel)):
        return None
    return "almost-group is built over the coordinate models only"


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    func: Callable
    kind: str = IDENTITY
    needs: tuple = field(default=())

    def not_applicable(self, env: Env) -> str | None:
        for need in self.needs:
            reason = need(env)
            if reason:
                return reason
        return None


CHECKS: list[Check] = []


def check(suite: str, kind: str = IDENTITY, needs: Iterable = ()):
    def register(func):
        CHECKS.append(Check(suite, func.__name__.lstrip("_"), func, kind, tuple(needs)))
        return func
    return register


# -- pentagon ------------------------------------------------------------

@check("pentagon")
def _s_inverse(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.s_inv(*env.sol.s_map(x, y)) == (x, y), (x, y)


@check("pentagon")
def _pentagon(env, rng):
    x, y, z = env.xs(rng, 3)
    lhs, rhs = pentagon_sides(env.sol, x, y, z)
    return lhs == rhs, (x, y, z)


# -- prop1 ---------------------------------------------------------------

@check("prop1")
def _dot_star_system(env, rng):
    x, y, z = env.xs(rng, 3)
    return env.sol.check_prop1(x, y, z), (x, y, z)


@check("prop1")
def _group_case(env, rng):
    sol = GroupCaseSolution(env.model)
    x, y, z = env.xs(rng, 3)
    return sol.star(x, y) == y and sol.check_prop1(x, y, z), (x, y, z)


@check("prop1")
def _rho_shift(env, rng):
    a, x, y = env.xs(rng, 3)
    shifted = env.sol.with_shift(a)
    return env.sol.star(x, y) == shifted.star(x, y), (a, x, y)


@check("prop1", ROUTE, [_tri2_c1])
def _star_closed_form(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.star(x, y) == star_closed_tri2(x, y), (x, y)


# -- factorization -------------------------------------------------------

def _unipotent_lower(rng, model: GroupModel) -> RatMatrix:
    r = lambda: model.rational(rng)
    one, zero = RatMatrix.identity(1)[0, 0], RatMatrix.zeros(1)[0, 0]
    return RatMatrix(3, 3, [one, zero, zero, r(), one, zero, r(), r(), one])


def ambient_sample(env: Env, rng) -> RatMatrix:
    """A random element of the ambient matrix group."""
    model = env.model
    if isinstance(model, SL3SModel):
        lo1 = _unipotent_lower(rng, model)
        lo2 = _unipotent_lower(rng, model)
        d1, d2 = model.rational(rng, nonzero=True), model.rational(rng, nonzero=True)
        up = _unipotent_lower(rng, model).transpose() @ RatMatrix.diag([d1, d2, 1 / (d1 * d2)])
        return lo1 @ up @ lo2
    size = model.ambient_size
    return Block2NModel(n=size // 2, sample_bound=model.sample_bound).random_matrix(rng)


def minus_sample(env: Env, rng) -> RatMatrix:
    model = env.model
    if isinstance(model, SL3SModel):
        y = model.sample(rng)
        return model.minus_matrix(y.coords)
    n = model.ambient_size // 2
    helper = Block2NModel(n=n, sample_bound=model.sample_bound)
    c = RatMatrix(n, n, [model.rational(rng) for _ in range(n * n)])
    return block_join(RatMatrix.identity(n), RatMatrix.zeros(n), c, helper.random_matrix(rng, n))


def _factorize(env, g):
    from .errors import NotFactorizable
    try:
        return factor(g, env.model)
    except NotFactorizable as exc:
        raise DomainError(str(exc)) from None


@check("factorization")
def _round_trip(env, rng):
    g = ambient_sample(env, rng)
    f = _factorize(env, g)
    sp = env.ctx.splitting
    ok = (
        f.reassemble_left() == g and f.reassemble_right() == g
        and sp.is_plus(f.gp) and sp.is_minus(f.gm)
        and sp.is_plus(f.gbp) and sp.is_minus(f.gbm)
    )
    return ok, (g,)


@check("factorization")
def _uniqueness(env, rng):
    gp = env.x(rng).to_matrix()
    gm = minus_sample(env, rng)
    f = _factorize(env, gp @ gm.inv())
    return (f.gp, f.gm) == (gp, gm), (gp, gm)


@check("factorization")
def _theta_conjugation(env, rng):
    gm = minus_sample(env, rng)
    return plus_membership(env.ctx.theta_conj(gm), env.model), (gm,)


@check("factorization")
def _normalize_theta(env, rng):
    ctx = env.ctx.normalized()
    g = minus_sample(env, rng)
    ok = ctx.theta.unipotent and plus_membership(ctx.theta_conj(g), env.model)
    return ok, (g,)


# -- lemma1 --------------------------------------------------------------

@check("lemma1")
def _lemma1(env, rng):
    g = ambient_sample(env, rng)
    from .errors import NotFactorizable
    try:
        return env.ctx.lemma1_check(g), (g,)
    except NotFactorizable as exc:
        raise DomainError(str(exc)) from None


# -- sigma ---------------------------------------------------------------

@check("sigma")
def _witness_independence(env, rng):
    x, y1, y2 = env.xs(rng, 3)
    return env.sol.sigma(x, y1) == env.sol.sigma(x, y2), (x, y1, y2)


@check("sigma", ROUTE)
def _sigma_closed(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.sigma(x, y) == env.sol.sigma_closed(x), (x, y)


@check("sigma", needs=[_central])
def _sigma_is_rho_inv(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.sigma(x, y) == env.sol.rho_inv(x), (x, y)


@check("sigma", needs=[_central])
def _rho_order3(env, rng):
    x = env.x(rng)
    rho = env.sol.rho
    return rho(rho(rho(x))) == x, (x,)


@check("sigma")
def _rho_inverse(env, rng):
    x = env.x(rng)
    return env.sol.rho_inv(env.sol.rho(x)) == x, (x,)


@check("sigma", ROUTE, [_closed])
def _rho_closed_form(env, rng):
    x = env.x(rng)
    return env.sol.rho(x) == rho_closed(env.model, env.config.theta, x), (x,)


# -- jot -----------------------------------------------------------------

@check("jot", needs=[_unipotent])
def _j_involution(env, rng):
    x = env.x(rng)
    return env.sol.j(env.sol.j(x)) == x, (x,)


@check("jot", ROUTE, [_unipotent])
def _k_routes(env, rng):
    x = env.x(rng)
    return env.sol.k(x) == env.sol.k_alt(x), (x,)


@check("jot", needs=[_unipotent])
def _j_functional_equation(env, rng):
    x, y = env.xs(rng, 2)
    j, k = env.sol.j, env.sol.k
    return j(x * y) == j(x) * j(k(x) * j(y)), (x, y)


@check("jot", ROUTE, [_unipotent, _closed])
def _j_closed_form(env, rng):
    x = env.x(rng)
    return env.sol.j(x) == j_closed(env.model, env.config.theta, x), (x,)


@check("jot", ROUTE, [_unipotent, _closed])
def _k_closed_form(env, rng):
    x = env.x(rng)
    return env.sol.k(x) == k_closed(env.model, env.config.theta, x), (x,)


# -- s3 ------------------------------------------------------------------

@check("s3", needs=[_unipotent])
def _i_involution(env, rng):
    x = env.x(rng)
    return x.inv().inv() == x, (x,)


@check("s3", needs=[_unipotent])
def _ij_order3(env, rng):
    x = env.x(rng)
    ij = lambda u: env.sol.j(u).inv()
    return ij(ij(ij(x))) == x, (x,)


@check("s3", needs=[_unipotent])
def _k_involution(env, rng):
    x = env.x(rng)
    return env.sol.k(env.sol.k(x)) == x, (x,)


# -- odot ----------------------------------------------------------------

@check("odot")
def _s_sbar(env, rng):
    x, y = env.xs(rng, 2)
    sol = env.sol
    u, v = sol.star(x, y), x * y
    return sol.odot(u, v) == y and sol.circledast(u, v) == x, (x, y)


@check("odot")
def _s_bar_op(env, rng):
    x, y = env.xs(rng, 2)
    sol = env.sol
    o, c = sol.odot(x, y), sol.circledast(x, y)
    return c * o == y and sol.star(c, o) == x, (x, y)


@check("odot")
def _odot_associativity(env, rng):
    x, y, z = env.xs(rng, 3)
    o = env.sol.odot
    return o(o(x, y), z) == o(x, o(y, z)), (x, y, z)


@check("odot", needs=[_unipotent])
def _odot_via_k(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.odot(x, y) == env.sol.odot_via_k(x, y), (x, y)


@check("odot", ROUTE, [_unipotent])
def _odot_routes(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.odot(x, y) == env.sol.odot_via_j(x, y), (x, y)


@check("odot", needs=[_unipotent])
def _odot_cancellation(env, rng):
    x, y = env.xs(rng, 2)
    o, j = env.sol.odot, env.sol.j
    return o(o(y, x), j(x)) == y and o(j(x), o(x, y)) == y, (x, y)


@check("odot", ROUTE, [_tri2_c1])
def _odot_closed_form(env, rng):
    x, y = env.xs(rng, 2)
    return env.sol.odot(x, y) == odot_closed_tri2(x, y), (x, y)


# -- almostgroup ---------------------------------------------------------

def _pair(env, rng) -> AlmostGroupElement:
    return env.almost.pair(*env.xs(rng, 2))


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _theta_square(env, rng):
    ag = env.almost
    return ag.mul(THETA, THETA) == ag.unit and ag.inv(THETA) == THETA, (THETA,)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _theta_conjugation_unit(env, rng):
    ag = env.almost
    x, e = env.x(rng), ag.unit_curve(rng)
    # j(e) has a pole at the unit, so theta (e, x) is compared in the realization
    lhs = ag.realize_at_zero(ag.mul(THETA, ag.pair(e, x)))
    rhs = ag.realize_at_zero(ag.mul(ag.pair(x, e), THETA))
    direct = ag.realize(ag.pair(x, ag.model.identity())) @ ag.theta_matrix
    return lhs == rhs == direct, (x,)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _split(env, rng):
    ag = env.almost
    x1, x2 = env.xs(rng, 2)
    e = ag.unit_curve(rng)
    return ag.pair_at_zero(ag.mul(ag.pair(x1, e), ag.pair(e, x2))) == ag.pair(x1, x2), (x1, x2)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _subgroups(env, rng):
    ag = env.almost
    x, y = env.xs(rng, 2)
    e = ag.unit_curve(rng)
    a = ag.pair_at_zero(ag.mul(ag.pair(x, e), ag.pair(y, e)))
    b = ag.pair_at_zero(ag.mul(ag.pair(e, x), ag.pair(e, y)))
    return a.pair[1].is_identity() and b.pair[0].is_identity(), (x, y)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _unit(env, rng):
    ag = env.almost
    p = _pair(env, rng)
    e = ag.unit_curve(rng)
    u = ag.pair(e, e)
    return ag.pair_at_zero(ag.mul(p, u)) == p and ag.pair_at_zero(ag.mul(u, p)) == p, (p,)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _associativity(env, rng):
    ag = env.almost
    p, q, r = _pair(env, rng), _pair(env, rng), _pair(env, rng)
    # every fourth triple carries a theta factor in a random slot
    if rng.randrange(4) == 0:
        slot = rng.randrange(3)
        p, q, r = [THETA if i == slot else t for i, t in enumerate((p, q, r))]
    return ag.mul(ag.mul(p, q), r) == ag.mul(p, ag.mul(q, r)), (p, q, r)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _inverse(env, rng):
    ag = env.almost
    p = _pair(env, rng)
    q = ag.inv(p)
    return ag.mul(p, q) == ag.unit and ag.mul(q, p) == ag.unit, (p,)


@check("almostgroup", needs=[_unipotent, _coordinate_base])
def _double_inverse(env, rng):
    ag = env.almost
    p = _pair(env, rng)
    return ag.inv(ag.inv(p)) == p, (p,)


@check("almostgroup", ROUTE, [_unipotent, _coordinate_base])
def _realization(env, rng):
    ag = env.almost
    p, q = _pair(env, rng), _pair(env, rng)
    if rng.randrange(4) == 0:
        p = THETA
    return ag.realize(ag.mul(p, q)) == ag.realize(p) @ ag.realize(q), (p, q)


# -- pullback ------------------------------------------------------------

@check("pullback")
def _pair_pullback(env, rng):
    x, y = env.xs(rng, 2)
    S = pullback(env.sol)
    u, v = env.sol.s_map(x, y)
    ok = all(S(f)(x, y) == f(u, v) for f in PAIR_TEST_FUNCTIONS.values())
    return ok, (x, y)


@check("pullback")
def _operator_pentagon(env, rng):
    x, y, z = env.xs(rng, 3)
    S12, S13, S23 = (pullback_triple(env.sol, w) for w in ("12", "13", "23"))
    ok = all(
        S12(S13(S23(f)))(x, y, z) == S23(S12(f))(x, y, z)
        for f in TRIPLE_TEST_FUNCTIONS.values()
    )
    return ok, (x, y, z)


# -- running -------------------------------------------------------------

def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return list(CHECKS)
    if suite not in SUITES:
        raise InvalidModel(f"unknown suite {suite!r}")
    return [c for c in CHECKS if c.suite == suite]


def _find_check(suite: str, name: str) -> Check:
    for c in CHECKS:
        if c.suite == suite and c.name == name:
            return c
    raise KeyError((suite, name))


def _witness_json(w):
    if isinstance(w, GroupElement):
        return element_to_json(w)
    if isinstance(w, AlmostGroupElement):
        return almost_to_json(w)
    if isinstance(w, RatMatrix):
        return matrix_to_json(w)
    raise TypeError(type(w))


@dataclass(frozen=True)
class ShardResult:
    passed: int
    rejected: int
    failures: tuple


def shard_rng(seed: int, config: Config, c: Check, shard: int) -> random.Random:
    return random.Random(f"{seed}:{config.key}:{c.suite}:{c.name}:{shard}")


def run_shard(config: Config, suite: str, name: str, seed: int, shard: int, quota: int,
              env: Env | None = None) -> ShardResult:
    c = _find_check(suite, name)
    env = Env(config) if env is None else env
    rng = shard_rng(seed, config, c, shard)
    passed = rejected = 0
    failures = []
    for _ in range(quota):
        streak = 0
        while True:
            try:
                ok, witness = c.func(env, rng)
                break
            except DomainError:
                rejected += 1
                streak += 1
                if streak >= MAX_REJECTIONS:
                    raise SamplingExhausted(
                        f"{suite}/{name}: {MAX_REJECTIONS} consecutive rejections"
                    ) from None
        if ok:
            passed += 1
        else:
            failures.append({"class": c.kind, "witness": [_witness_json(w) for w in witness]})
    return ShardResult(passed, rejected, tuple(failures))


def _quotas(samples: int, shards: int) -> list[int]:
    base, extra = divmod(samples, shards)
    return [base + (k < extra) for k in range(shards)]


def _report(config: Config, c: Check, samples: int, results: list[ShardResult]) -> dict:
    passed = sum(r.passed for r in results)
    rejected = sum(r.rejected for r in results)
    failures = [f for r in results for f in r.failures]
    attempts = samples + rejected
    if attempts >= MIN_DRAWS_FOR_RATE and rejected / attempts > MAX_REJECTION_RATE:
        raise RejectionRateExceeded(
            f"{c.suite}/{c.name} on {config.key}: {rejected} of {attempts} draws rejected"
        )
    return {
        "suite": c.suite,
        "check": c.name,
        "class": c.kind,
        "model": model_to_json(config.model),
        "theta": theta_to_json(config.theta),
        "samples": samples,
        "passed": passed,
        "failed": len(failures),
        "rejected": rejected,
        "failures": failures[:MAX_STORED_FAILURES],
    }


def run_check(config: Config, c: Check, samples: int, seed: int, shards: int = 1) -> dict:
    """Run one check in-process and return its report line."""
    env = Env(config)
    results = [
        run_shard(config, c.suite, c.name, seed, k, q, env)
        for k, q in enumerate(_quotas(samples, shards))
    ]
    return _report(config, c, samples, results)


def _params_text(theta: Theta) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(theta_to_json(theta).items()) if k != "model")


def run_verify(configs: list[Config], suite: str, samples: int, seed: int,
               shards: int = 1) -> tuple[list[dict], int]:
    """Run ``suite`` over ``configs``; returns report lines and the exit code.

    An explicitly selected suite whose checks all need a unipotent theta raises
    :class:`ThetaNotUnipotent`; under ``all`` such checks are reported as
    skipped.
    """
    if samples < 1:
        raise InvalidModel("samples must be >= 1")
    if shards < 1:
        raise InvalidModel("shards must be >= 1")
    selected = checks_for(suite)
    needs_unipotent = suite != "all" and all(_unipotent in c.needs for c in selected)
    plan: list[tuple[Config, Check]] = []
    skipped: dict = {}
    for config in configs:
        env = Env(config)
        if needs_unipotent and _unipotent(env):
            raise ThetaNotUnipotent(
                f"suite {suite!r} needs theta^2 = 1; got {_params_text(config.theta)}"
            )
        for c in selected:
            reason = c.not_applicable(env)
            if reason is None:
                plan.append((config, c))
            else:
                skipped[(config, c.name, c.suite)] = reason

    quotas = _quotas(samples, shards)
    tasks = [(cfg, c.suite, c.name, seed, k, q) for cfg, c in plan for k, q in enumerate(quotas)]
    if shards > 1:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            futures = [pool.submit(run_shard, *t) for t in tasks]
            results = [f.result() for f in futures]
    else:
        envs: dict[Config, Env] = {}
        results = []
        for t in tasks:
            env = envs.setdefault(t[0], Env(t[0]))
            results.append(run_shard(*t, env=env))

    reports = {}
    per = len(quotas)
    for idx, (config, c) in enumerate(plan):
        reports[(config, c.name, c.suite)] = _report(
            config, c, samples, results[idx * per:(idx + 1) * per]
        )

    out: list[dict] = []
    for config in configs:
        for c in selected:
            key = (config, c.name, c.suite)
            if key in reports:
                out.append(reports[key])
            else:
                out.append({
                    "suite": c.suite,
                    "check": c.name,
                    "class": c.kind,
                    "model": model_to_json(config.model),
                    "theta": theta_to_json(config.theta),
                    "skipped": skipped[key],
                })
    ran = [r for r in out if "skipped" not in r]
    identity_failures = sum(r["failed"] for r in ran if r["class"] == IDENTITY)
    route_failures = sum(r["failed"] for r in ran if r["class"] == ROUTE)
    code = 1 if identity_failures or route_failures else 0
    out.append({
        "summary": True,
        "suite": suite,
        "seed": seed,
        "checks": len(ran),
        "skipped": len(out) - len(ran),
        "passed": sum(r["passed"] for r in ran),
        "rejected": sum(r["rejected"] for r in ran),
        "identity_failures": identity_failures,
        "route_failures": route_failures,
        "exit": code,
    })
    return out, code
