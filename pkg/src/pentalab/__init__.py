"""Exact-arithmetic set-theoretical pentagon solutions from factorizable groups."""

from .almost import THETA, AlmostGroup, AlmostGroupElement
from .errors import (
    DimensionMismatch,
    DomainError,
    IndexOutOfRange,
    InvalidModel,
    ModelMismatch,
    NotFactorizable,
    PentalabError,
    RejectionRateExceeded,
    SamplingExhausted,
    Singular,
    ThetaNotUnipotent,
    UnsupportedType,
)
from .factor import Factorization, FactorizationContext, Theta, factor, normalize_theta
from .groups import Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import RatMatrix, parse_rational
from .maps import FactorizedSolution, GroupCaseSolution, PentagonSolution
from .rootdata import DynkinType, cartan_matrix, h_decomposition_dims, tau

__all__ = [
    "THETA", "AlmostGroup", "AlmostGroupElement",
    "DimensionMismatch", "DomainError", "IndexOutOfRange", "InvalidModel", "ModelMismatch",
    "NotFactorizable", "PentalabError", "RejectionRateExceeded", "SamplingExhausted",
    "Singular", "ThetaNotUnipotent", "UnsupportedType",
    "Factorization", "FactorizationContext", "Theta", "factor", "normalize_theta",
    "Block2NModel", "GroupElement", "GroupModel", "SL3SModel", "Tri2Model",
    "RatMatrix", "parse_rational",
    "FactorizedSolution", "GroupCaseSolution", "PentagonSolution",
    "DynkinType", "cartan_matrix", "h_decomposition_dims", "tau",
]

__version__ = "0.1.0"
