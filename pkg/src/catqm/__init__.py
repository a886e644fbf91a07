"""Exact verification of entanglement protocols over a typed term
language for dagger compact closed categories with biproducts.

Morphism terms are typechecked against strict normal forms of objects,
evaluated into matrices over an involutive semiring (exact Q(i, sqrt2),
Booleans, or complex floats), rewritten by the information-flow laws,
and checked bit-exactly against the protocol theorems.
"""

from .kernel import (MorphismTerm, ObjectExpr, Signature, TypeJudgment,
                     object_dim, strictify, typecheck)
from .matrix import (Matrix, Model, adjoint, conjugate, dsum, evaluate,
                     inner_product, kron, partial_trace, scalar_dimension,
                     trace_full, transpose)
from .models import standard_model, standard_signature
from .rewrite import CATALOG, apply_rule, normalize, semantic_equal
from .scalars import (QiSqrt2, ScalarError, format_scalar, parse_scalar,
                      scalar_combine, scalar_invert, scalar_involution)

__version__ = "0.1.0"

__all__ = [
    "MorphismTerm", "ObjectExpr", "Signature", "TypeJudgment",
    "object_dim", "strictify", "typecheck",
    "Matrix", "Model", "adjoint", "conjugate", "dsum", "evaluate",
    "inner_product", "kron", "partial_trace", "scalar_dimension",
    "trace_full", "transpose",
    "standard_model", "standard_signature",
    "CATALOG", "apply_rule", "normalize", "semantic_equal",
    "QiSqrt2", "ScalarError", "format_scalar", "parse_scalar",
    "scalar_combine", "scalar_invert", "scalar_involution",
    "__version__",
]
