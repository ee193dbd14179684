import random
from fractions import Fraction as F

import pytest

from pentalab.errors import InvalidModel, ModelMismatch
from pentalab.groups import Block2NModel, SL3SModel, Tri2Model
from pentalab.linalg import RatMatrix

TRI2 = Tri2Model()
SL3 = SL3SModel()
MODELS = [TRI2, SL3, SL3SModel(s=(1, -1, 0)), SL3SModel(s=(-1, 1, 0)), SL3SModel(s=(0, 1, -1)),
          Block2NModel(n=1), Block2NModel(n=2)]


# oracle values


def test_tri2_mul_oracle():
    assert (TRI2.element((2, 3)) * TRI2.element((5, 7))).coords == (10, 17)
    assert TRI2.element((2, 3)).inv().coords == (F(1, 2), F(-3, 2))


def test_sl3_mul_oracle():
    x = SL3.element((2, 1, 1, 1))
    y = SL3.element((3, 1, 1, 1))
    assert (x * y).coords == (6, F(4, 3), F(13, 3), 10)


def test_sl3_inverse_oracle():
    x = SL3.element((2, 1, 1, 1))
    assert x.inv().coords == (F(1, 2), -2, 0, F(-1, 4))


def test_sl3_matrix_oracle():
    assert SL3.element((2, 1, 1, 1)).to_matrix() == RatMatrix.from_rows(
        [[1, 1, 1], [0, "1/2", "1/2"], [0, 0, 2]]
    )


def test_sl3_root_exponent():
    assert [SL3SModel(s=s).root_exponent for s in [(0, -1, 1), (1, -1, 0)]] == [-1, 1]


@pytest.mark.parametrize("s", [(1, 1, 1), (0, 0, 0), ("1/2", "-1/2", 0), (2, -1, -1), (1, 0, -1)])
def test_sl3_rejects_bad_exponents(s):
    with pytest.raises(InvalidModel):
        SL3SModel(s=s)


def test_invalid_elements():
    with pytest.raises(InvalidModel):
        TRI2.element((0, 1))
    with pytest.raises(InvalidModel):
        SL3.element((0, 1, 1, 1))
    with pytest.raises(InvalidModel):
        Block2NModel(n=1).element([[1, 2], [2, 4]])
    with pytest.raises(InvalidModel):
        Block2NModel(n=0)


def test_model_mismatch():
    with pytest.raises(ModelMismatch):
        TRI2.identity() * Block2NModel(n=1).identity()


# invariants


@pytest.mark.parametrize("model", MODELS, ids=repr)
def test_group_axioms_and_matrix_homomorphism(model):
    rng = random.Random(f"groups:{model!r}")
    one = model.identity()
    for _ in range(60):
        x, y, z = (model.sample(rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * x.inv() == one == x.inv() * x
        assert x * one == x == one * x
        assert (x * y).to_matrix() == x.to_matrix() @ y.to_matrix()
        assert x.inv().to_matrix() == x.to_matrix().inv()


def test_sl3_matrices_have_unit_determinant():
    rng = random.Random(3)
    for s in [(0, -1, 1), (1, -1, 0), (-1, 1, 0), (0, 1, -1)]:
        model = SL3SModel(s=s)
        for _ in range(20):
            assert model.sample(rng).to_matrix().det() == 1


def test_sampling_is_seeded():
    a = [TRI2.sample(random.Random(9)) for _ in range(3)]
    b = [TRI2.sample(random.Random(9)) for _ in range(3)]
    assert a == b


def test_block_plus_samples():
    model = Block2NModel(n=2)
    rng = random.Random(1)
    for _ in range(20):
        assert model.is_plus(model.sample_plus(rng).coords)
