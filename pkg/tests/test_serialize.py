import json
import random

import pytest

from pentalab.almost import THETA
from pentalab.errors import InvalidModel
from pentalab.factor import Theta, factor
from pentalab.groups import Block2NModel, SL3SModel, Tri2Model
from pentalab.linalg import RatMatrix
from pentalab.serialize import (
    almost_from_json,
    almost_to_json,
    element_from_json,
    element_to_json,
    factorization_to_json,
    matrix_from_json,
    matrix_to_json,
    theta_from_json,
    theta_to_json,
)


def test_element_formats():
    assert element_to_json(Tri2Model().element((2, 3))) == {"model": "tri2", "coords": ["2", "3"]}
    x = SL3SModel().element((2, 1, 1, "-1/4"))
    assert element_to_json(x) == {"model": "sl3s", "s": ["0", "-1", "1"], "coords": ["2", "1", "1", "-1/4"]}
    b = Block2NModel(n=1).element([[1, 2], [3, 4]])
    assert element_to_json(b) == {
        "model": "block2n", "n": 1,
        "matrix": {"rows": 2, "cols": 2, "entries": [["1", "2"], ["3", "4"]]},
    }


def test_round_trips():
    rng = random.Random(0)
    for model in (Tri2Model(), SL3SModel(s=(1, -1, 0)), Block2NModel(n=2)):
        for _ in range(10):
            x = model.sample(rng)
            assert element_from_json(json.loads(json.dumps(element_to_json(x)))) == x
    m = RatMatrix.from_rows([["1/2", -3], [0, 7]])
    assert matrix_from_json(matrix_to_json(m)) == m
    assert matrix_from_json([["1/2", -3], [0, 7]]) == m


def test_theta_round_trip():
    tri2, sl3, b2 = Tri2Model(), SL3SModel(), Block2NModel(n=2)
    assert theta_to_json(Theta.tri2(tri2, 2, 3)) == {"model": "tri2", "b": "2", "c": "3"}
    for theta in (Theta.tri2(tri2, 2, 3), Theta.sl3s(sl3, 2, "1/3"), Theta.block2n(b2, 3, 2)):
        assert theta_from_json(theta_to_json(theta)).matrix == theta.matrix


def test_almost_round_trip():
    x = Tri2Model().element((2, 3))
    assert almost_to_json(THETA) == {"theta": True}
    assert almost_from_json({"theta": True}) == THETA
    from pentalab.almost import AlmostGroupElement
    p = AlmostGroupElement((x, x.inv()))
    assert almost_from_json(almost_to_json(p)) == p


def test_factorization_json():
    f = factor(RatMatrix.from_rows([[1, 2], [3, 4]]), Block2NModel(n=1))
    out = factorization_to_json(f, True)
    assert set(out) == {"gp", "gm", "gbp", "gbm", "reassembly"}
    assert out["gp"]["entries"] == [["-1/2", "1/2"], ["0", "1"]]


def test_bad_inputs():
    with pytest.raises(InvalidModel):
        element_from_json({"model": "gl5", "coords": []})
    with pytest.raises(InvalidModel):
        matrix_from_json({"rows": 3, "cols": 2, "entries": [["1", "2"], ["3", "4"]]})
    with pytest.raises(ValueError):
        matrix_from_json([["0.5"]])
