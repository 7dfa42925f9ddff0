"""Executable engine for higher-order process theories.

A free term calculus over tensor/arrow object types with exact rational
matrix semantics, a property checker for causality and no-signalling
structure, circuit skeletons, and a small .hopt DSL with a CLI driver.
"""

from .objects import (
    UNIT,
    Arrow,
    Base,
    ObjExpr,
    Signature,
    SignatureError,
    Tensor,
    Unit,
    dimension,
    double_dual,
    dual,
    is_causal_object,
    is_first_order,
    obj_to_str,
)
from .semantics import (
    BOOLEAN,
    RATIONAL,
    ConsistencyError,
    ExactMatrix,
    Interpretation,
    check_eq,
    eval_term,
    matrix_from_json,
    matrix_to_json,
    random_interpretation,
)
from .terms import (
    HoptTypeError,
    MorTerm,
    TypedTerm,
    arrow_functor,
    curry,
    dualiser,
    hat,
    lift,
    name_state,
    phi,
    phi_inv,
    term_to_str,
    typecheck,
)

__version__ = "0.1.0"

__all__ = [
    "UNIT", "Arrow", "Base", "ObjExpr", "Signature", "SignatureError", "Tensor",
    "Unit", "dimension", "double_dual", "dual", "is_causal_object",
    "is_first_order", "obj_to_str",
    "BOOLEAN", "RATIONAL", "ConsistencyError", "ExactMatrix", "Interpretation",
    "check_eq", "eval_term", "matrix_from_json", "matrix_to_json",
    "random_interpretation",
    "HoptTypeError", "MorTerm", "TypedTerm", "arrow_functor", "curry",
    "dualiser", "hat", "lift", "name_state", "phi", "phi_inv", "term_to_str",
    "typecheck",
    "__version__",
]
