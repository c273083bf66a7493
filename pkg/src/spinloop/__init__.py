"""Mod-2 cohomology of BSO_n, BSpin_n and their free loop spaces, by exact GF(2) linear algebra."""

from .errors import ContractError, NotExpressibleError, UnsupportedSizeError
from .f2core import EchelonForm, F2Matrix, F2Vector, kernel_basis, rank, solve
from .fibersq import (
    Presentation,
    gysin_assemble,
    ideal_membership,
    spin_presentation,
    tensor_over_base,
    euler_matrix,
)
from .invariants import (
    PermAction,
    action_matrix,
    faithfulness_check,
    invariant_dims,
    smith_criterion_report,
    subalgebra_dims,
)
from .loopalg import LoopModel, bso_loop_model, loop_basis, loop_multiply, loop_series, sigma
from .polyalg import (
    AlgebraMap,
    Element,
    GradedPolyAlgebra,
    PowerSeries,
    alpha_map,
    bso_algebra,
    closed_form_series,
    torus_algebra,
)
from .steenrod import SteenrodRule, bso_rule, express_in_w, phi, sq, wu_formula

__version__ = "0.1.0"

__all__ = [
    "AlgebraMap",
    "ContractError",
    "EchelonForm",
    "Element",
    "F2Matrix",
    "F2Vector",
    "GradedPolyAlgebra",
    "LoopModel",
    "NotExpressibleError",
    "PermAction",
    "PowerSeries",
    "Presentation",
    "SteenrodRule",
    "UnsupportedSizeError",
    "action_matrix",
    "alpha_map",
    "bso_algebra",
    "bso_loop_model",
    "bso_rule",
    "closed_form_series",
    "euler_matrix",
    "express_in_w",
    "faithfulness_check",
    "gysin_assemble",
    "ideal_membership",
    "invariant_dims",
    "kernel_basis",
    "loop_basis",
    "loop_multiply",
    "loop_series",
    "phi",
    "rank",
    "sigma",
    "smith_criterion_report",
    "solve",
    "spin_presentation",
    "sq",
    "subalgebra_dims",
    "tensor_over_base",
    "torus_algebra",
    "wu_formula",
]
