import random

import pytest

from pentalab.errors import InvalidModel, NotFactorizable
from pentalab.factor import (
    FactorizationContext,
    Theta,
    factor,
    minus_membership,
    normalize_theta,
    plus_membership,
)
from pentalab.groups import Block2NModel, SL3SModel, Tri2Model
from pentalab.linalg import RatMatrix
from pentalab.suites import Config, Env, ambient_sample, minus_sample

B1 = Block2NModel(n=1)
TRI2 = Tri2Model()
SL3 = SL3SModel()


def M(rows):
    return RatMatrix.from_rows(rows)


# oracle values


def test_factor_oracle():
    f = factor(M([[1, 2], [3, 4]]), B1)
    assert f.gp == M([["-1/2", "1/2"], [0, 1]])
    assert f.gm.inv() == M([[1, 0], [3, 4]])
    assert f.reassemble_left() == f.reassemble_right() == M([[1, 2], [3, 4]])


def test_factor_identity():
    for model in (B1, Block2NModel(n=2), SL3):
        one = RatMatrix.identity(model.ambient_size)
        f = factor(one, model)
        assert f.gp == f.gm == f.gbp == f.gbm == one


def test_not_factorizable():
    with pytest.raises(NotFactorizable):
        factor(M([[1, 2], [3, 0]]), B1)
    with pytest.raises(NotFactorizable):
        factor(M([[0, 2], [3, 1]]), B1)
    with pytest.raises(NotFactorizable):
        factor(M([[0, 0, 1], [0, -1, 0], [1, 0, 0]]), SL3)


def test_membership_oracles():
    assert plus_membership(M([[5, 7], [0, 1]]), B1)
    assert not minus_membership(M([[5, 7], [0, 1]]), B1)
    assert minus_membership(M([[1, 0], [7, 5]]), B1)
    one = RatMatrix.identity(2)
    assert plus_membership(one, B1) and minus_membership(one, B1)


def test_theta_mul_oracle():
    ctx = FactorizationContext(TRI2, Theta.tri2(TRI2, 1, 1))
    assert ctx.theta_mul(TRI2.element((2, 3))) == M([[0, 1], [2, 3]])


def test_normalize_oracle():
    theta = normalize_theta(Theta.tri2(TRI2, 2, 3))
    assert theta.matrix == M([[0, "1/3"], [3, 0]])
    assert theta.unipotent


def test_normalize_fixes_unipotent_theta():
    for theta in (Theta.tri2(TRI2, 2, "1/2"), Theta.block2n(Block2NModel(n=2), 3)):
        assert normalize_theta(theta).matrix == theta.matrix


@pytest.mark.parametrize("b,c,unipotent", [(1, 1, True), (2, "1/2", True), (1, 2, False), (-1, 1, False)])
def test_tri2_unipotent_flag(b, c, unipotent):
    theta = Theta.tri2(TRI2, b, c)
    assert theta.unipotent is unipotent
    assert theta.square_central


@pytest.mark.parametrize("a,b,unipotent", [(1, 1, True), (3, 3, True), (2, 3, False)])
def test_sl3_unipotent_flag(a, b, unipotent):
    assert Theta.sl3s(SL3, a, b).unipotent is unipotent


def test_block_theta_always_unipotent():
    model = Block2NModel(n=2)
    b = M([[1, 2], [0, 3]])
    assert Theta.block2n(model, b).unipotent


def test_invalid_theta():
    with pytest.raises(InvalidModel):
        Theta.tri2(TRI2, 0, 1)
    with pytest.raises(InvalidModel):
        Theta.sl3s(SL3, 1, 0)
    with pytest.raises(InvalidModel):
        Theta.block2n(Block2NModel(n=2), M([[1, 2], [2, 4]]))


# invariants

CONFIGS = [
    Config(TRI2, Theta.tri2(TRI2, 2, 3)),
    Config(SL3, Theta.sl3s(SL3, 2, 3)),
    Config(SL3SModel(s=(1, -1, 0)), Theta.sl3s(SL3SModel(s=(1, -1, 0)), 1, 1)),
    Config.of(B1),
    Config(Block2NModel(n=2), Theta.block2n(Block2NModel(n=2), 2, 3)),
]


@pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.key)
def test_round_trip_uniqueness_lemma(config):
    env = Env(config)
    sp = env.ctx.splitting
    rng = random.Random(config.key)
    done = 0
    for _ in range(80):
        g = ambient_sample(env, rng)
        try:
            f = factor(g, config.model)
            lemma = env.ctx.lemma1_check(g)
        except NotFactorizable:
            continue
        done += 1
        assert f.reassemble_left() == g == f.reassemble_right()
        assert sp.is_plus(f.gp) and sp.is_plus(f.gbp)
        assert sp.is_minus(f.gm) and sp.is_minus(f.gbm)
        assert lemma
        gm = minus_sample(env, rng)
        assert plus_membership(env.ctx.theta_conj(gm), config.model)
    assert done >= 40


def test_normalized_theta_still_conjugates():
    rng = random.Random(5)
    for config in CONFIGS:
        env = Env(config)
        ctx = env.ctx.normalized()
        assert ctx.theta.unipotent
        for _ in range(10):
            assert plus_membership(ctx.theta_conj(minus_sample(env, rng)), config.model)
