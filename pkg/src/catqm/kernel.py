"""Typed term language for morphisms in a dagger compact closed category
with biproducts, together with the strict normal form on objects and the
bidirectional typechecker.

Objects are generated from the tensor unit, declared generator objects,
duals, tensors, biproducts and the zero object.  Object equality (as used
by the typechecker) is syntactic equality of *strict normal forms*:
tensor units are eliminated, tensors are right-associated, duals are
pushed to the leaves (``A** = A``, ``(A x B)* = A* x B*``, ``I* = I``,
``(A + B)* = A* + B*``) and biproducts are left-associated.  The
structural isomorphisms remain available as morphism constructors so
that diagrams can be transcribed node for node; they all typecheck
against strict normal forms and denote identity (or permutation)
matrices.

All values here are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Tuple

from .scalars import QiSqrt2


class TermTypeError(TypeError):
    """A term failed to typecheck (shape clash, bad index, unknown name)."""


# ---------------------------------------------------------------------------
# objects
# ---------------------------------------------------------------------------


class ObjectExpr:
    __slots__ = ()


@dataclass(frozen=True)
class UnitI(ObjectExpr):
    pass


@dataclass(frozen=True)
class ZeroObj(ObjectExpr):
    pass


@dataclass(frozen=True)
class GenObj(ObjectExpr):
    name: str


@dataclass(frozen=True)
class Dual(ObjectExpr):
    inner: ObjectExpr


@dataclass(frozen=True)
class Tensor(ObjectExpr):
    left: ObjectExpr
    right: ObjectExpr


@dataclass(frozen=True)
class Biprod(ObjectExpr):
    left: ObjectExpr
    right: ObjectExpr


UNIT = UnitI()
ZERO_OBJ = ZeroObj()


def tensor_of(objs):
    """Right-associated tensor of a sequence (empty product is the unit)."""
    objs = list(objs)
    if not objs:
        return UNIT
    out = objs[-1]
    for a in reversed(objs[:-1]):
        out = Tensor(a, out)
    return out


def biprod_of(objs):
    """Left-associated biproduct of a nonempty sequence."""
    objs = list(objs)
    out = objs[0]
    for a in objs[1:]:
        out = Biprod(out, a)
    return out


def n_unit(n):
    """The object n . I."""
    return biprod_of([UNIT] * n) if n >= 1 else ZERO_OBJ


def n_copies(n, a):
    return biprod_of([a] * n)


def format_object(a: ObjectExpr) -> str:
    if isinstance(a, UnitI):
        return "(I)"
    if isinstance(a, ZeroObj):
        return "(zero)"
    if isinstance(a, GenObj):
        return a.name
    if isinstance(a, Dual):
        return f"(dual {format_object(a.inner)})"
    if isinstance(a, Tensor):
        return f"(ten {format_object(a.left)} {format_object(a.right)})"
    if isinstance(a, Biprod):
        return f"(sum {format_object(a.left)} {format_object(a.right)})"
    raise TypeError(f"not an object expression: {a!r}")


def _push_dual(a: ObjectExpr, flip: bool) -> ObjectExpr:
    """Rewrite so duals sit only on generator leaves."""
    if isinstance(a, Dual):
        return _push_dual(a.inner, not flip)
    if isinstance(a, UnitI) or isinstance(a, ZeroObj):
        return a
    if isinstance(a, GenObj):
        return Dual(a) if flip else a
    if isinstance(a, Tensor):
        return Tensor(_push_dual(a.left, flip), _push_dual(a.right, flip))
    if isinstance(a, Biprod):
        return Biprod(_push_dual(a.left, flip), _push_dual(a.right, flip))
    raise TypeError(f"not an object expression: {a!r}")


def _reassoc(a: ObjectExpr) -> ObjectExpr:
    if isinstance(a, Tensor):
        factors = []

        def collect(x):
            if isinstance(x, Tensor):
                collect(x.left)
                collect(x.right)
            else:
                n = _reassoc(x)
                if not isinstance(n, UnitI):
                    factors.append(n)

        collect(a)
        return tensor_of(factors)
    if isinstance(a, Biprod):
        summands = []

        def collect(x):
            if isinstance(x, Biprod):
                collect(x.left)
                collect(x.right)
            else:
                summands.append(_reassoc(x))

        collect(a)
        return biprod_of(summands)
    if isinstance(a, Dual):
        return Dual(_reassoc(a.inner))
    return a


def strictify(a: ObjectExpr, sig: "Signature | None" = None) -> ObjectExpr:
    """Strict normal form of an object expression.  Idempotent.

    With a signature given, unknown generator names are rejected.
    """
    if sig is not None:
        _check_declared(a, sig)
    return _reassoc(_push_dual(a, False))


def _check_declared(a, sig):
    if isinstance(a, GenObj):
        if a.name not in sig.objects:
            raise TermTypeError(f"undeclared object generator {a.name!r}")
    elif isinstance(a, Dual):
        _check_declared(a.inner, sig)
    elif isinstance(a, (Tensor, Biprod)):
        _check_declared(a.left, sig)
        _check_declared(a.right, sig)


def tensor_factors_of(a: ObjectExpr):
    """Factors of a strict tensor chain (the unit has none)."""
    out = []
    while isinstance(a, Tensor):
        out.append(a.left)
        a = a.right
    if not isinstance(a, UnitI):
        out.append(a)
    return out


def biprod_summands_of(a: ObjectExpr):
    out = []
    while isinstance(a, Biprod):
        out.insert(0, a.right)
        a = a.left
    out.insert(0, a)
    return out


def object_dim(model, a: ObjectExpr) -> int:
    """Dimension of an object: multiplicative over tensor, additive over
    biproduct, invariant under duals.  ``model`` is a name->dim mapping or
    anything exposing one as ``.dims``."""
    dims = model if isinstance(model, Mapping) else model.dims
    if isinstance(a, UnitI):
        return 1
    if isinstance(a, ZeroObj):
        return 0
    if isinstance(a, GenObj):
        try:
            return dims[a.name]
        except KeyError:
            raise TermTypeError(f"undeclared object generator {a.name!r}") from None
    if isinstance(a, Dual):
        return object_dim(dims, a.inner)
    if isinstance(a, Tensor):
        return object_dim(dims, a.left) * object_dim(dims, a.right)
    if isinstance(a, Biprod):
        return object_dim(dims, a.left) + object_dim(dims, a.right)
    raise TypeError(f"not an object expression: {a!r}")


# ---------------------------------------------------------------------------
# signature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MorGen:
    """Declared morphism generator: typing plus exact matrix entries.

    ``entries`` is row-major with shape (dim cod, dim dom); models convert
    it into their own semiring.
    """

    dom: ObjectExpr
    cod: ObjectExpr
    entries: Tuple[QiSqrt2, ...]


@dataclass(frozen=True)
class Signature:
    """Generator declarations shared by every model of a document."""

    objects: Mapping[str, int] = field(default_factory=dict)
    morphisms: Mapping[str, MorGen] = field(default_factory=dict)

    def __post_init__(self):
        for name, gen in self.morphisms.items():
            rows = object_dim(self.objects, strictify(gen.cod, self))
            cols = object_dim(self.objects, strictify(gen.dom, self))
            if len(gen.entries) != rows * cols:
                raise TermTypeError(
                    f"generator {name!r}: {len(gen.entries)} entries for a "
                    f"{rows}x{cols} matrix")

    def extended(self, objects=None, morphisms=None) -> "Signature":
        objs = dict(self.objects)
        mors = dict(self.morphisms)
        objs.update(objects or {})
        mors.update(morphisms or {})
        return Signature(objs, mors)

    @property
    def dims(self):
        return self.objects


# ---------------------------------------------------------------------------
# morphism terms
# ---------------------------------------------------------------------------


class MorphismTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Id(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class GenMor(MorphismTerm):
    name: str


@dataclass(frozen=True)
class Compose(MorphismTerm):
    """after . before  (``before`` is applied first)."""

    after: MorphismTerm
    before: MorphismTerm


@dataclass(frozen=True)
class TensorM(MorphismTerm):
    left: MorphismTerm
    right: MorphismTerm


@dataclass(frozen=True)
class Dagger(MorphismTerm):
    arg: MorphismTerm


@dataclass(frozen=True)
class DualM(MorphismTerm):
    """f* : B* -> A* for f : A -> B (transpose)."""

    arg: MorphismTerm


@dataclass(frozen=True)
class ConjM(MorphismTerm):
    """f_* : A* -> B* for f : A -> B (entrywise involution)."""

    arg: MorphismTerm


@dataclass(frozen=True)
class Eta(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class Epsilon(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class Sigma(MorphismTerm):
    left: ObjectExpr
    right: ObjectExpr


@dataclass(frozen=True)
class Lambda(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class LambdaInv(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class Rho(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class RhoInv(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class Alpha(MorphismTerm):
    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


@dataclass(frozen=True)
class AlphaInv(MorphismTerm):
    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


@dataclass(frozen=True)
class UnitDual(MorphismTerm):
    """I* -> I."""


@dataclass(frozen=True)
class UnitDualInv(MorphismTerm):
    """I -> I*."""


@dataclass(frozen=True)
class BiprodDual(MorphismTerm):
    """(A + B)* -> A* + B*."""

    a: ObjectExpr
    b: ObjectExpr


@dataclass(frozen=True)
class BiprodDualInv(MorphismTerm):
    a: ObjectExpr
    b: ObjectExpr


@dataclass(frozen=True)
class DoubleDual(MorphismTerm):
    """A** -> A."""

    obj: ObjectExpr


@dataclass(frozen=True)
class DoubleDualInv(MorphismTerm):
    obj: ObjectExpr


@dataclass(frozen=True)
class Inj(MorphismTerm):
    """q_i : A_i -> A_1 + ... + A_n (1-based index)."""

    index: int
    parts: Tuple[ObjectExpr, ...]


@dataclass(frozen=True)
class Proj(MorphismTerm):
    """p_i : A_1 + ... + A_n -> A_i (1-based index)."""

    index: int
    parts: Tuple[ObjectExpr, ...]


@dataclass(frozen=True)
class Pair(MorphismTerm):
    """<f_1, ..., f_n> : dom -> cod_1 + ... + cod_n."""

    parts: Tuple[MorphismTerm, ...]


@dataclass(frozen=True)
class Copair(MorphismTerm):
    """[f_1, ..., f_n] : dom_1 + ... + dom_n -> cod."""

    parts: Tuple[MorphismTerm, ...]


@dataclass(frozen=True)
class ZeroM(MorphismTerm):
    dom: ObjectExpr
    cod: ObjectExpr


@dataclass(frozen=True)
class Plus(MorphismTerm):
    left: MorphismTerm
    right: MorphismTerm


@dataclass(frozen=True)
class ScalarMul(MorphismTerm):
    """s . f with an exact scalar literal (models reinterpret it)."""

    scalar: QiSqrt2
    arg: MorphismTerm


@dataclass(frozen=True)
class Name(MorphismTerm):
    """name(f) : I -> A* x B for f : A -> B."""

    arg: MorphismTerm


@dataclass(frozen=True)
class Coname(MorphismTerm):
    """coname(f) : A x B* -> I for f : A -> B."""

    arg: MorphismTerm


@dataclass(frozen=True)
class DistR(MorphismTerm):
    """A x (B + C) -> (A x B) + (A x C)."""

    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


@dataclass(frozen=True)
class DistRInv(MorphismTerm):
    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


@dataclass(frozen=True)
class DistL(MorphismTerm):
    """(A + B) x C -> (A x C) + (B x C)."""

    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


@dataclass(frozen=True)
class DistLInv(MorphismTerm):
    a: ObjectExpr
    b: ObjectExpr
    c: ObjectExpr


# ---------------------------------------------------------------------------
# type judgments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeJudgment:
    dom: ObjectExpr
    cod: ObjectExpr

    def swapped(self):
        return TypeJudgment(self.cod, self.dom)

    def __str__(self):
        return f"{format_object(self.dom)} -> {format_object(self.cod)}"


def _j(dom, cod, sig):
    return TypeJudgment(strictify(dom, sig), strictify(cod, sig))


def typecheck(t: MorphismTerm, sig: Signature) -> TypeJudgment:
    """Domain/codomain inference; raises TermTypeError on any mismatch."""
    if isinstance(t, Id):
        a = strictify(t.obj, sig)
        return TypeJudgment(a, a)
    if isinstance(t, GenMor):
        gen = sig.morphisms.get(t.name)
        if gen is None:
            raise TermTypeError(f"undeclared morphism generator {t.name!r}")
        return _j(gen.dom, gen.cod, sig)
    if isinstance(t, Compose):
        jf = typecheck(t.before, sig)
        jg = typecheck(t.after, sig)
        if jf.cod != jg.dom:
            raise TermTypeError(
                "composition mismatch: cannot feed "
                f"{format_object(jf.cod)} into {format_object(jg.dom)}")
        return TypeJudgment(jf.dom, jg.cod)
    if isinstance(t, TensorM):
        jl = typecheck(t.left, sig)
        jr = typecheck(t.right, sig)
        return _j(Tensor(jl.dom, jr.dom), Tensor(jl.cod, jr.cod), sig)
    if isinstance(t, Dagger):
        return typecheck(t.arg, sig).swapped()
    if isinstance(t, DualM):
        jf = typecheck(t.arg, sig)
        return _j(Dual(jf.cod), Dual(jf.dom), sig)
    if isinstance(t, ConjM):
        jf = typecheck(t.arg, sig)
        return _j(Dual(jf.dom), Dual(jf.cod), sig)
    if isinstance(t, Eta):
        return _j(UNIT, Tensor(Dual(t.obj), t.obj), sig)
    if isinstance(t, Epsilon):
        return _j(Tensor(t.obj, Dual(t.obj)), UNIT, sig)
    if isinstance(t, Sigma):
        return _j(Tensor(t.left, t.right), Tensor(t.right, t.left), sig)
    if isinstance(t, Lambda):
        return _j(t.obj, t.obj, sig)
    if isinstance(t, LambdaInv):
        return _j(t.obj, t.obj, sig)
    if isinstance(t, Rho):
        return _j(t.obj, t.obj, sig)
    if isinstance(t, RhoInv):
        return _j(t.obj, t.obj, sig)
    if isinstance(t, (Alpha, AlphaInv)):
        x = Tensor(t.a, Tensor(t.b, t.c))
        return _j(x, x, sig)
    if isinstance(t, (UnitDual, UnitDualInv)):
        return TypeJudgment(UNIT, UNIT)
    if isinstance(t, (BiprodDual, BiprodDualInv)):
        x = Biprod(Dual(t.a), Dual(t.b))
        return _j(x, x, sig)
    if isinstance(t, (DoubleDual, DoubleDualInv)):
        return _j(t.obj, t.obj, sig)
    if isinstance(t, Inj):
        _check_index(t.index, t.parts)
        return _j(t.parts[t.index - 1], biprod_of(t.parts), sig)
    if isinstance(t, Proj):
        _check_index(t.index, t.parts)
        return _j(biprod_of(t.parts), t.parts[t.index - 1], sig)
    if isinstance(t, Pair):
        if not t.parts:
            raise TermTypeError("pairing needs at least one component")
        js = [typecheck(p, sig) for p in t.parts]
        dom = js[0].dom
        for k, j in enumerate(js[1:], start=2):
            if j.dom != dom:
                raise TermTypeError(
                    f"pairing component {k} has domain {format_object(j.dom)}"
                    f" but component 1 has {format_object(dom)}")
        return _j(dom, biprod_of([j.cod for j in js]), sig)
    if isinstance(t, Copair):
        if not t.parts:
            raise TermTypeError("copairing needs at least one component")
        js = [typecheck(p, sig) for p in t.parts]
        cod = js[0].cod
        for k, j in enumerate(js[1:], start=2):
            if j.cod != cod:
                raise TermTypeError(
                    f"copairing component {k} has codomain {format_object(j.cod)}"
                    f" but component 1 has {format_object(cod)}")
        return _j(biprod_of([j.dom for j in js]), cod, sig)
    if isinstance(t, ZeroM):
        return _j(t.dom, t.cod, sig)
    if isinstance(t, Plus):
        jl = typecheck(t.left, sig)
        jr = typecheck(t.right, sig)
        if jl != jr:
            raise TermTypeError(
                f"summands have different types: {jl} versus {jr}")
        return jl
    if isinstance(t, ScalarMul):
        return typecheck(t.arg, sig)
    if isinstance(t, Name):
        jf = typecheck(t.arg, sig)
        return _j(UNIT, Tensor(Dual(jf.dom), jf.cod), sig)
    if isinstance(t, Coname):
        jf = typecheck(t.arg, sig)
        return _j(Tensor(jf.dom, Dual(jf.cod)), UNIT, sig)
    if isinstance(t, DistR):
        return _j(Tensor(t.a, Biprod(t.b, t.c)),
                  Biprod(Tensor(t.a, t.b), Tensor(t.a, t.c)), sig)
    if isinstance(t, DistRInv):
        return _j(Biprod(Tensor(t.a, t.b), Tensor(t.a, t.c)),
                  Tensor(t.a, Biprod(t.b, t.c)), sig)
    if isinstance(t, DistL):
        return _j(Tensor(Biprod(t.a, t.b), t.c),
                  Biprod(Tensor(t.a, t.c), Tensor(t.b, t.c)), sig)
    if isinstance(t, DistLInv):
        return _j(Biprod(Tensor(t.a, t.c), Tensor(t.b, t.c)),
                  Tensor(Biprod(t.a, t.b), t.c), sig)
    raise TermTypeError(f"not a morphism term: {t!r}")


def _check_index(i, parts):
    if not parts:
        raise TermTypeError("empty biproduct component list")
    if not 1 <= i <= len(parts):
        raise TermTypeError(
            f"index {i} out of range for {len(parts)} biproduct components")


# ---------------------------------------------------------------------------
# generic traversal (used by the rewrite engine and the DOT exporter)
# ---------------------------------------------------------------------------


_CHILD_FIELDS = {
    Compose: ("after", "before"),
    TensorM: ("left", "right"),
    Dagger: ("arg",),
    DualM: ("arg",),
    ConjM: ("arg",),
    Plus: ("left", "right"),
    ScalarMul: ("arg",),
    Name: ("arg",),
    Coname: ("arg",),
}


def term_children(t: MorphismTerm):
    """Subterms of ``t`` in a fixed order (Pair/Copair expose their parts)."""
    if isinstance(t, (Pair, Copair)):
        return list(t.parts)
    fields = _CHILD_FIELDS.get(type(t))
    if fields is None:
        return []
    return [getattr(t, f) for f in fields]


def term_with_children(t: MorphismTerm, children) -> MorphismTerm:
    if isinstance(t, (Pair, Copair)):
        return type(t)(tuple(children))
    fields = _CHILD_FIELDS.get(type(t))
    if fields is None:
        if children:
            raise ValueError(f"{type(t).__name__} has no children")
        return t
    if isinstance(t, ScalarMul):
        return ScalarMul(t.scalar, children[0])
    return type(t)(*children)


def subterm_at(t: MorphismTerm, path) -> MorphismTerm:
    for i in path:
        kids = term_children(t)
        if not 0 <= i < len(kids):
            raise IndexError(f"path step {i} invalid for {type(t).__name__}")
        t = kids[i]
    return t


def replace_at(t: MorphismTerm, path, new: MorphismTerm) -> MorphismTerm:
    if not path:
        return new
    kids = term_children(t)
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"path step {i} invalid for {type(t).__name__}")
    kids = list(kids)
    kids[i] = replace_at(kids[i], path[1:], new)
    return term_with_children(t, kids)


def term_size(t: MorphismTerm) -> int:
    return 1 + sum(term_size(c) for c in term_children(t))
