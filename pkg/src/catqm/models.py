"""Built-in signature and the three standard models.

The shared signature declares a two-dimensional basic object ``Q`` with
its computational basis ``base_Q`` (the identity on I+I -> Q), the four
entangled-pair correction maps ``beta1..beta4``, the Hadamard map ``H``
and the two-qubit ``CNOT`` permutation.  It ships as an embedded document
so that the command-line ``verify`` suites need no input files.

Models:

* ``fdhilb-exact`` -- entries in Q(i, sqrt2); the verification model.
* ``rel``          -- Boolean entries (a matrix is a relation).
* ``fdhilb-float`` -- complex doubles, for smoke tests only.
"""

from __future__ import annotations

from . import dsl
from .matrix import Model, ModelError
from .scalars import BOOL, CFLOAT, EXACT

STANDARD_SIGNATURE_DOC = """\
; shared generators of the standard models
(object Q 2)
(morphism base_Q (sum (I) (I)) Q (matrix (row 1 0) (row 0 1)))
(morphism beta1 Q Q (matrix (row 1 0) (row 0 1)))
(morphism beta2 Q Q (matrix (row 0 1) (row 1 0)))
(morphism beta3 Q Q (matrix (row 1 0) (row 0 -1)))
(morphism beta4 Q Q (matrix (row 0 -1) (row 1 0)))
(morphism H Q Q (matrix (row 1/2*r2 1/2*r2) (row 1/2*r2 -1/2*r2)))
(morphism CNOT (ten Q Q) (ten Q Q)
  (matrix (row 1 0 0 0) (row 0 1 0 0) (row 0 0 0 1) (row 0 0 1 0)))
"""

MODEL_NAMES = ("fdhilb-exact", "rel", "fdhilb-float")

_SEMIRING_FOR = {
    "fdhilb-exact": EXACT,
    "rel": BOOL,
    "fdhilb-float": CFLOAT,
}


def standard_signature():
    return dsl.parse_document(STANDARD_SIGNATURE_DOC).signature


def standard_model(name: str = "fdhilb-exact") -> Model:
    sr = _SEMIRING_FOR.get(name)
    if sr is None:
        raise ModelError(
            f"unknown model {name!r}; choose one of {', '.join(MODEL_NAMES)}")
    return Model(name, sr, standard_signature())


def model_over(name: str, signature) -> Model:
    """A model with the given name's semiring over a custom signature."""
    sr = _SEMIRING_FOR.get(name)
    if sr is None:
        raise ModelError(
            f"unknown model {name!r}; choose one of {', '.join(MODEL_NAMES)}")
    return Model(name, sr, signature)
