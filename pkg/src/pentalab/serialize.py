"""JSON encodings of rationals, matrices, elements and conjugating elements."""

from __future__ import annotations

from typing import Any

from .almost import THETA, AlmostGroupElement
from .errors import InvalidModel
from .factor import Factorization, Theta
from .groups import Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import RatMatrix, format_rational, parse_rational

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "model_to_json",
    "model_from_json",
    "element_to_json",
    "element_from_json",
    "theta_to_json",
    "theta_from_json",
    "factorization_to_json",
    "almost_to_json",
    "almost_from_json",
]


def _rat(value) -> Any:
    if isinstance(value, int) and not isinstance(value, bool):
        return parse_rational(str(value))
    return parse_rational(value)


def matrix_to_json(m: RatMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[format_rational(e) for e in m.row(i)] for i in range(m.rows)],
    }


def matrix_from_json(obj) -> RatMatrix:
    """Accepts the matrix object or a bare list of rows."""
    if isinstance(obj, list):
        return RatMatrix.from_rows([[_rat(e) for e in row] for row in obj])
    m = RatMatrix.from_rows([[_rat(e) for e in row] for row in obj["entries"]])
    if m.shape != (obj["rows"], obj["cols"]):
        raise InvalidModel("declared shape does not match entries")
    return m


def model_to_json(model: GroupModel) -> dict:
    if isinstance(model, SL3SModel):
        return {"model": "sl3s", "s": [format_rational(v) for v in model.s]}
    if isinstance(model, Block2NModel):
        return {"model": "block2n", "n": model.n}
    return {"model": "tri2"}


def model_from_json(obj: dict) -> GroupModel:
    kind = obj.get("model")
    if kind == "tri2":
        return Tri2Model()
    if kind == "sl3s":
        s = obj.get("s", ["0", "-1", "1"])
        return SL3SModel(s=tuple(_rat(v) for v in s))
    if kind == "block2n":
        return Block2NModel(n=int(obj.get("n", 1)))
    raise InvalidModel(f"unknown model {kind!r}")


def element_to_json(x: GroupElement) -> dict:
    out = model_to_json(x.model)
    if isinstance(x.model, Block2NModel):
        out["matrix"] = matrix_to_json(x.coords)
    else:
        out["coords"] = [format_rational(c) for c in x.coords]
    return out


def element_from_json(obj: dict) -> GroupElement:
    model = model_from_json(obj)
    if isinstance(model, Block2NModel):
        return model.element(matrix_from_json(obj["matrix"]))
    return model.element([_rat(c) for c in obj["coords"]])


def theta_to_json(theta: Theta) -> dict:
    out = model_to_json(theta.model)
    for key, value in theta.params.items():
        if isinstance(value, RatMatrix):
            out[key] = matrix_to_json(value)
        elif isinstance(value, bool):
            out[key] = value
        else:
            out[key] = format_rational(value)
    if theta.params.get("normalized"):
        out["matrix"] = matrix_to_json(theta.matrix)
    return out


def theta_from_json(obj: dict) -> Theta:
    model = model_from_json(obj)
    if isinstance(model, Tri2Model):
        return Theta.tri2(model, _rat(obj.get("b", "1")), _rat(obj.get("c", "1")))
    if isinstance(model, SL3SModel):
        return Theta.sl3s(model, _rat(obj.get("a", "1")), _rat(obj.get("b", "1")))

    def block(v):
        if v is None:
            return None
        return matrix_from_json(v) if isinstance(v, (dict, list)) else _rat(v)

    return Theta.block2n(model, block(obj.get("b", "1")), block(obj.get("c")))


def factorization_to_json(f: Factorization, reassembles: bool) -> dict:
    return {
        "gp": matrix_to_json(f.gp),
        "gm": matrix_to_json(f.gm),
        "gbp": matrix_to_json(f.gbp),
        "gbm": matrix_to_json(f.gbm),
        "reassembly": reassembles,
    }


def almost_to_json(p: AlmostGroupElement) -> dict:
    if p.is_theta:
        return {"theta": True}
    return {"pair": [element_to_json(x) for x in p.pair]}


def almost_from_json(obj: dict) -> AlmostGroupElement:
    if obj.get("theta"):
        return THETA
    x1, x2 = (element_from_json(e) for e in obj["pair"])
    return AlmostGroupElement((x1, x2))
