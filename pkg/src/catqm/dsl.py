"""S-expression surface syntax for objects, morphism terms and documents.

A *term document* is a sequence of top-level forms:

    (object NAME DIM)                          object generator
    (morphism NAME DOM COD (matrix (row ...))) morphism generator
    (def NAME TERM)                            named term
    (term TERM)                                entry term

Objects: ``(I)``, ``(zero)``, ``NAME``, ``(dual A)``, ``(ten A B ...)``,
``(sum A B ...)``.  Morphisms: ``(id A)``, ``(gen NAME)``, ``(o g f ...)``,
``(x f g ...)``, ``(dg f)``, ``(dualm f)``, ``(conj f)``, ``(eta A)``,
``(eps A)``, ``(sg A B)``, ``(lam A)``/``(lam-inv A)``, ``(rho A)``/
``(rho-inv A)``, ``(alpha A B C)``/``(alpha-inv A B C)``, ``(udual)``/
``(udual-inv)``, ``(bdual A B)``/``(bdual-inv A B)``, ``(ddual A)``/
``(ddual-inv A)``, ``(inj K SUM)``, ``(proj K SUM)``, ``(pair f ...)``,
``(copair f ...)``, ``(zero-m A B)``, ``(plus f g)``, ``(sc LIT f)``,
``(name f)``, ``(coname f)``, ``(distR A B C)``, ``(distL A B C)`` and
their ``-inv`` forms.  Biproduct indices are 1-based; matrix entries and
``sc`` literals use the exact-scalar text form; ``;`` starts a comment.

A bare atom in morphism position refers to a preceding ``def``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import kernel as k
from .scalars import QiSqrt2, ScalarError, format_scalar, parse_scalar


class DslParseError(ValueError):
    """Parse failure with source position and the tokens that would fit."""

    def __init__(self, message, line=None, col=None, expected=None):
        self.line = line
        self.col = col
        self.expected = tuple(expected or ())
        loc = f" at line {line}, column {col}" if line is not None else ""
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message}{loc}{hint}")


# ---------------------------------------------------------------------------
# lexing / reading
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SExpr:
    """Either an atom (text) or a list of children; carries its position."""

    atom: Optional[str]
    items: Tuple["SExpr", ...]
    line: int
    col: int

    @property
    def is_atom(self):
        return self.atom is not None

    def head(self):
        if self.is_atom or not self.items or not self.items[0].is_atom:
            return None
        return self.items[0].atom


def _lex(text: str):
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            toks.append(_Tok(ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            toks.append(_Tok(text[start:i], line, start_col))
    return toks


def _read_all(text: str) -> List[SExpr]:
    toks = _lex(text)
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise DslParseError("unexpected end of input", expected=["(", "atom"])
        tok = toks[pos]
        pos += 1
        if tok.text == "(":
            items = []
            while True:
                if pos >= len(toks):
                    raise DslParseError(
                        "unclosed parenthesis", tok.line, tok.col, expected=[")"])
                if toks[pos].text == ")":
                    pos += 1
                    return SExpr(None, tuple(items), tok.line, tok.col)
                items.append(read())
        if tok.text == ")":
            raise DslParseError("unexpected ')'", tok.line, tok.col,
                                expected=["(", "atom"])
        return SExpr(tok.text, (), tok.line, tok.col)

    forms = []
    while pos < len(toks):
        forms.append(read())
    return forms


# ---------------------------------------------------------------------------
# object conversion
# ---------------------------------------------------------------------------


_OBJECT_HEADS = ("I", "zero", "dual", "ten", "sum")


def _as_object(e: SExpr) -> k.ObjectExpr:
    if e.is_atom:
        return k.GenObj(e.atom)
    h = e.head()
    args = e.items[1:]
    if h == "I":
        _arity(e, 0)
        return k.UNIT
    if h == "zero":
        _arity(e, 0)
        return k.ZERO_OBJ
    if h == "dual":
        _arity(e, 1)
        return k.Dual(_as_object(args[0]))
    if h == "ten":
        _arity_at_least(e, 2)
        return k.tensor_of([_as_object(a) for a in args])
    if h == "sum":
        _arity_at_least(e, 2)
        return k.biprod_of([_as_object(a) for a in args])
    raise DslParseError(f"not an object form: {h!r}", e.line, e.col,
                        expected=_OBJECT_HEADS)


def _sum_parts(e: SExpr) -> Tuple[k.ObjectExpr, ...]:
    obj = _as_object(e)
    if not isinstance(obj, k.Biprod):
        raise DslParseError("expected a (sum ...) object", e.line, e.col,
                            expected=["sum"])
    return tuple(k.biprod_summands_of(obj))


def _arity(e: SExpr, n):
    if len(e.items) - 1 != n:
        raise DslParseError(
            f"({e.head()} ...) takes {n} argument(s), got {len(e.items) - 1}",
            e.line, e.col)


def _arity_at_least(e: SExpr, n):
    if len(e.items) - 1 < n:
        raise DslParseError(
            f"({e.head()} ...) takes at least {n} argument(s), got {len(e.items) - 1}",
            e.line, e.col)


# ---------------------------------------------------------------------------
# term conversion
# ---------------------------------------------------------------------------


_TERM_HEADS = (
    "id", "gen", "o", "x", "dg", "dualm", "conj", "eta", "eps", "sg",
    "lam", "lam-inv", "rho", "rho-inv", "alpha", "alpha-inv",
    "udual", "udual-inv", "bdual", "bdual-inv", "ddual", "ddual-inv",
    "inj", "proj", "pair", "copair", "zero-m", "plus", "sc",
    "name", "coname", "distR", "distR-inv", "distL", "distL-inv",
)


def _as_term(e: SExpr, defs) -> k.MorphismTerm:
    if e.is_atom:
        if e.atom in defs:
            return defs[e.atom]
        raise DslParseError(f"unknown term name {e.atom!r}", e.line, e.col,
                            expected=sorted(defs) or ["(def ...)"])
    h = e.head()
    args = e.items[1:]

    def obj(i):
        return _as_object(args[i])

    def sub(i):
        return _as_term(args[i], defs)

    if h == "id":
        _arity(e, 1)
        return k.Id(obj(0))
    if h == "gen":
        _arity(e, 1)
        if not args[0].is_atom:
            raise DslParseError("(gen ...) takes a generator name",
                                args[0].line, args[0].col)
        return k.GenMor(args[0].atom)
    if h == "o":
        _arity_at_least(e, 2)
        parts = [_as_term(a, defs) for a in args]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = k.Compose(p, out)
        return out
    if h == "x":
        _arity_at_least(e, 2)
        parts = [_as_term(a, defs) for a in args]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = k.TensorM(p, out)
        return out
    if h == "dg":
        _arity(e, 1)
        return k.Dagger(sub(0))
    if h == "dualm":
        _arity(e, 1)
        return k.DualM(sub(0))
    if h == "conj":
        _arity(e, 1)
        return k.ConjM(sub(0))
    if h == "eta":
        _arity(e, 1)
        return k.Eta(obj(0))
    if h == "eps":
        _arity(e, 1)
        return k.Epsilon(obj(0))
    if h == "sg":
        _arity(e, 2)
        return k.Sigma(obj(0), obj(1))
    if h == "lam":
        _arity(e, 1)
        return k.Lambda(obj(0))
    if h == "lam-inv":
        _arity(e, 1)
        return k.LambdaInv(obj(0))
    if h == "rho":
        _arity(e, 1)
        return k.Rho(obj(0))
    if h == "rho-inv":
        _arity(e, 1)
        return k.RhoInv(obj(0))
    if h == "alpha":
        _arity(e, 3)
        return k.Alpha(obj(0), obj(1), obj(2))
    if h == "alpha-inv":
        _arity(e, 3)
        return k.AlphaInv(obj(0), obj(1), obj(2))
    if h == "udual":
        _arity(e, 0)
        return k.UnitDual()
    if h == "udual-inv":
        _arity(e, 0)
        return k.UnitDualInv()
    if h == "bdual":
        _arity(e, 2)
        return k.BiprodDual(obj(0), obj(1))
    if h == "bdual-inv":
        _arity(e, 2)
        return k.BiprodDualInv(obj(0), obj(1))
    if h == "ddual":
        _arity(e, 1)
        return k.DoubleDual(obj(0))
    if h == "ddual-inv":
        _arity(e, 1)
        return k.DoubleDualInv(obj(0))
    if h in ("inj", "proj"):
        _arity(e, 2)
        idx = _as_index(args[0])
        parts = _sum_parts(args[1])
        return (k.Inj if h == "inj" else k.Proj)(idx, parts)
    if h == "pair":
        _arity_at_least(e, 1)
        return k.Pair(tuple(_as_term(a, defs) for a in args))
    if h == "copair":
        _arity_at_least(e, 1)
        return k.Copair(tuple(_as_term(a, defs) for a in args))
    if h == "zero-m":
        _arity(e, 2)
        return k.ZeroM(obj(0), obj(1))
    if h == "plus":
        _arity(e, 2)
        return k.Plus(sub(0), sub(1))
    if h == "sc":
        _arity(e, 2)
        if not args[0].is_atom:
            raise DslParseError("(sc ...) takes a scalar literal",
                                args[0].line, args[0].col)
        try:
            s = parse_scalar(args[0].atom)
        except ScalarError as exc:
            raise DslParseError(str(exc), args[0].line, args[0].col) from None
        return k.ScalarMul(s, sub(1))
    if h == "name":
        _arity(e, 1)
        return k.Name(sub(0))
    if h == "coname":
        _arity(e, 1)
        return k.Coname(sub(0))
    if h == "distR":
        _arity(e, 3)
        return k.DistR(obj(0), obj(1), obj(2))
    if h == "distR-inv":
        _arity(e, 3)
        return k.DistRInv(obj(0), obj(1), obj(2))
    if h == "distL":
        _arity(e, 3)
        return k.DistL(obj(0), obj(1), obj(2))
    if h == "distL-inv":
        _arity(e, 3)
        return k.DistLInv(obj(0), obj(1), obj(2))
    raise DslParseError(f"not a term form: {h!r}", e.line, e.col,
                        expected=_TERM_HEADS)


def _as_index(e: SExpr) -> int:
    if not e.is_atom or not e.atom.isdigit():
        raise DslParseError("expected a 1-based index", e.line, e.col,
                            expected=["1", "2", "..."])
    return int(e.atom)


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------


@dataclass
class TermDocument:
    signature: k.Signature
    defs: dict = field(default_factory=dict)
    entry: Optional[k.MorphismTerm] = None
    def_order: List[str] = field(default_factory=list)


def parse_document(text: str) -> TermDocument:
    forms = _read_all(text)
    objects = {}
    morphisms = {}
    defs = {}
    def_order = []
    entry = None
    for form in forms:
        h = form.head()
        if h == "object":
            _arity(form, 2)
            name_e, dim_e = form.items[1], form.items[2]
            if not name_e.is_atom or not dim_e.is_atom or not dim_e.atom.isdigit():
                raise DslParseError("(object NAME DIM) with a numeric DIM",
                                    form.line, form.col)
            objects[name_e.atom] = int(dim_e.atom)
        elif h == "morphism":
            _arity(form, 4)
            name_e = form.items[1]
            if not name_e.is_atom:
                raise DslParseError("(morphism NAME DOM COD MATRIX)",
                                    form.line, form.col)
            dom = _as_object(form.items[2])
            cod = _as_object(form.items[3])
            entries = _as_matrix_entries(form.items[4])
            morphisms[name_e.atom] = k.MorGen(dom, cod, entries)
        elif h == "def":
            _arity(form, 2)
            name_e = form.items[1]
            if not name_e.is_atom:
                raise DslParseError("(def NAME TERM)", form.line, form.col)
            defs[name_e.atom] = _as_term(form.items[2], defs)
            def_order.append(name_e.atom)
        elif h == "term":
            _arity(form, 1)
            entry = _as_term(form.items[1], defs)
        else:
            raise DslParseError(f"unknown top-level form {h!r}", form.line,
                                form.col, expected=["object", "morphism", "def", "term"])
    try:
        sig = k.Signature(objects, morphisms)
    except k.TermTypeError as exc:
        raise DslParseError(str(exc)) from None
    return TermDocument(sig, defs, entry, def_order)


def _as_matrix_entries(e: SExpr) -> Tuple[QiSqrt2, ...]:
    if e.head() != "matrix":
        raise DslParseError("expected (matrix (row ...) ...)", e.line, e.col,
                            expected=["matrix"])
    entries = []
    width = None
    for row in e.items[1:]:
        if row.head() != "row":
            raise DslParseError("expected (row ...)", row.line, row.col,
                                expected=["row"])
        cells = row.items[1:]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DslParseError("ragged matrix rows", row.line, row.col)
        for cell in cells:
            if not cell.is_atom:
                raise DslParseError("matrix entries are scalar literals",
                                    cell.line, cell.col)
            try:
                entries.append(parse_scalar(cell.atom))
            except ScalarError as exc:
                raise DslParseError(str(exc), cell.line, cell.col) from None
    return tuple(entries)


def parse_term(text: str) -> k.MorphismTerm:
    """Parse a single bare term (no document wrapper)."""
    forms = _read_all(text)
    if len(forms) != 1:
        raise DslParseError(f"expected one term, found {len(forms)} forms")
    return _as_term(forms[0], {})


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def print_object(a: k.ObjectExpr) -> str:
    return k.format_object(a)


def print_term(t: k.MorphismTerm) -> str:
    K = k
    if isinstance(t, K.Id):
        return f"(id {print_object(t.obj)})"
    if isinstance(t, K.GenMor):
        return f"(gen {t.name})"
    if isinstance(t, K.Compose):
        return f"(o {print_term(t.after)} {print_term(t.before)})"
    if isinstance(t, K.TensorM):
        return f"(x {print_term(t.left)} {print_term(t.right)})"
    if isinstance(t, K.Dagger):
        return f"(dg {print_term(t.arg)})"
    if isinstance(t, K.DualM):
        return f"(dualm {print_term(t.arg)})"
    if isinstance(t, K.ConjM):
        return f"(conj {print_term(t.arg)})"
    if isinstance(t, K.Eta):
        return f"(eta {print_object(t.obj)})"
    if isinstance(t, K.Epsilon):
        return f"(eps {print_object(t.obj)})"
    if isinstance(t, K.Sigma):
        return f"(sg {print_object(t.left)} {print_object(t.right)})"
    if isinstance(t, K.Lambda):
        return f"(lam {print_object(t.obj)})"
    if isinstance(t, K.LambdaInv):
        return f"(lam-inv {print_object(t.obj)})"
    if isinstance(t, K.Rho):
        return f"(rho {print_object(t.obj)})"
    if isinstance(t, K.RhoInv):
        return f"(rho-inv {print_object(t.obj)})"
    if isinstance(t, K.Alpha):
        return f"(alpha {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    if isinstance(t, K.AlphaInv):
        return f"(alpha-inv {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    if isinstance(t, K.UnitDual):
        return "(udual)"
    if isinstance(t, K.UnitDualInv):
        return "(udual-inv)"
    if isinstance(t, K.BiprodDual):
        return f"(bdual {print_object(t.a)} {print_object(t.b)})"
    if isinstance(t, K.BiprodDualInv):
        return f"(bdual-inv {print_object(t.a)} {print_object(t.b)})"
    if isinstance(t, K.DoubleDual):
        return f"(ddual {print_object(t.obj)})"
    if isinstance(t, K.DoubleDualInv):
        return f"(ddual-inv {print_object(t.obj)})"
    if isinstance(t, K.Inj):
        return f"(inj {t.index} {print_object(k.biprod_of(t.parts))})"
    if isinstance(t, K.Proj):
        return f"(proj {t.index} {print_object(k.biprod_of(t.parts))})"
    if isinstance(t, K.Pair):
        return "(pair " + " ".join(print_term(p) for p in t.parts) + ")"
    if isinstance(t, K.Copair):
        return "(copair " + " ".join(print_term(p) for p in t.parts) + ")"
    if isinstance(t, K.ZeroM):
        return f"(zero-m {print_object(t.dom)} {print_object(t.cod)})"
    if isinstance(t, K.Plus):
        return f"(plus {print_term(t.left)} {print_term(t.right)})"
    if isinstance(t, K.ScalarMul):
        return f"(sc {format_scalar(t.scalar)} {print_term(t.arg)})"
    if isinstance(t, K.Name):
        return f"(name {print_term(t.arg)})"
    if isinstance(t, K.Coname):
        return f"(coname {print_term(t.arg)})"
    if isinstance(t, K.DistR):
        return f"(distR {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    if isinstance(t, K.DistRInv):
        return f"(distR-inv {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    if isinstance(t, K.DistL):
        return f"(distL {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    if isinstance(t, K.DistLInv):
        return f"(distL-inv {print_object(t.a)} {print_object(t.b)} {print_object(t.c)})"
    raise TypeError(f"not a morphism term: {t!r}")


def print_document(doc: TermDocument) -> str:
    lines = []
    for name in sorted(doc.signature.objects):
        lines.append(f"(object {name} {doc.signature.objects[name]})")
    for name in sorted(doc.signature.morphisms):
        gen = doc.signature.morphisms[name]
        cols = k.object_dim(doc.signature.objects, k.strictify(gen.dom))
        rows_txt = []
        for i in range(0, len(gen.entries), cols) if cols else []:
            row = gen.entries[i:i + cols]
            rows_txt.append("(row " + " ".join(format_scalar(x) for x in row) + ")")
        lines.append(
            f"(morphism {name} {print_object(gen.dom)} {print_object(gen.cod)} "
            f"(matrix {' '.join(rows_txt)}))")
    for name in doc.def_order:
        lines.append(f"(def {name} {print_term(doc.defs[name])})")
    if doc.entry is not None:
        lines.append(f"(term {print_term(doc.entry)})")
    return "\n".join(lines) + "\n"
