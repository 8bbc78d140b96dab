"""Weighted-shift operator calculus on l2 of integer lattices.

Exact identities are decided on integer lattices with formal coefficients
in ``q**(1/2)``; identities involving the quantum exponential are checked
numerically through a Fourier functional calculus on shift orbits.
"""
from ._kernels import BACKEND
from .bosonization import (
    WtildeHandle,
    apply_Wtilde,
    boson_comult_check,
    boson_relations_check,
    ordinary_pentagon_residual,
)
from .dual_group import (
    DualUnitaryHandle,
    ResidualReport,
    apply_Fhat,
    braided_pentagon_residual,
    comult_check,
    slice_identity_residual,
)
from .lattice import (
    FiniteVector,
    OpExpr,
    ShiftMonomial,
    adjoint,
    apply,
    compose,
    conjugate,
    embed_leg,
    equal_exact,
    identity,
)
from .operators import build_catalog, embedding_j, generator, relation_registry
from .qexp import (
    FiberDescriptor,
    QexpParams,
    apply_fq,
    apply_fq_shift_class,
    dense_oracle_fq,
    fiber_decompose,
    fq_scalar,
)
from .scalars import Deformation, DomainError, ExactScalar

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Deformation", "DomainError", "DualUnitaryHandle", "ExactScalar",
    "FiberDescriptor", "FiniteVector", "OpExpr", "QexpParams", "ResidualReport",
    "ShiftMonomial", "WtildeHandle", "adjoint", "apply", "apply_Fhat", "apply_Wtilde",
    "apply_fq", "apply_fq_shift_class", "boson_comult_check", "boson_relations_check",
    "braided_pentagon_residual", "build_catalog", "comult_check", "compose", "conjugate",
    "dense_oracle_fq", "embed_leg", "embedding_j", "equal_exact", "fiber_decompose",
    "fq_scalar", "generator", "identity", "ordinary_pentagon_residual", "relation_registry",
    "slice_identity_residual",
]
