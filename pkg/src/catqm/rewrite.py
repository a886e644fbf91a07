"""Term-level rewrite engine for the information-flow laws.

The catalog directs each law left to right, the way entanglement
networks reduce:

* absorption                (1_{A*} x g) . name(f)      ->  name(g . f)
* backward absorption       (g* x 1_B) . name(f)        ->  name(f . g)
* coname absorption         coname(f) . (h x 1_{B*})    ->  coname(f . h)
* coname backward absorption  coname(f) . (1_A x g*)    ->  coname(g . f)
* compositionality   (coname(f) x 1_C) . (1_A x name(g)) -> g . f
* compositional cut  (1_{A*} x coname(g) x 1_D) . (name(f) x name(h))
                                                         -> name(h . g . f)
* dagger involution         f dagger dagger              -> f
* dagger antihomomorphism   (g . f) dagger               -> f dagger . g dagger
* ket-bra idempotence   psi.psi'.psi.psi' -> <psi|psi> . (psi.psi')
* name/coname of identity   name(1_A) -> eta_A, coname(1_A) -> eps_A
* structural-iso erasure    lam/rho/alpha/udual/bdual/ddual -> identities
* composition unit          1 . f -> f,  f . 1 -> f

Matching is syntactic modulo the *strict* structural isomorphisms:
before any matching, terms are canonicalised by right-associating
composition and tensor chains, merging adjacent identity tensor factors
and dropping unit identity factors.  Matching is not modulo full
symmetric-monoidal equivalence, and no confluence is claimed; instead
``normalize`` is checked against the matrix semantics.

The unit and counit are matched as the name and coname of the identity
(which they are, definitionally), so the flow rules fire on eta/eps too.

Termination: every rule strictly decreases the lexicographic measure
(number of name/coname/eta/eps nodes, number of composition nodes, total
size of subterms under daggers, number of erasable structural
isomorphisms, term size).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from . import kernel as k
from .matrix import Model, evaluate

_ERASABLE = (k.Lambda, k.LambdaInv, k.Rho, k.RhoInv, k.Alpha, k.AlphaInv,
             k.UnitDual, k.UnitDualInv, k.BiprodDual, k.BiprodDualInv,
             k.DoubleDual, k.DoubleDualInv)


class RewriteError(ValueError):
    """No match at the requested path, or an ill-typed instantiation."""


@dataclass(frozen=True)
class Path:
    """Child indices addressing a subterm (empty tuple = root)."""

    steps: Tuple[int, ...] = ()

    def child(self, i):
        return Path(self.steps + (i,))


ROOT = Path()


# ---------------------------------------------------------------------------
# canonical form for matching
# ---------------------------------------------------------------------------


def compose_chain(t):
    """Flatten a composition spine: [x1, x2, ..., xn] with xn applied first."""
    out = []
    while isinstance(t, k.Compose):
        out.append(t.after)
        t = t.before
    out.append(t)
    return out


def chain_term(parts):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = k.Compose(p, out)
    return out


def tensor_chain(t):
    out = []
    while isinstance(t, k.TensorM):
        out.append(t.left)
        t = t.right
    out.append(t)
    return out


def tensor_term(parts):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = k.TensorM(p, out)
    return out


def canon(t: k.MorphismTerm) -> k.MorphismTerm:
    """Right-associate composition and tensor chains; merge and drop
    identity tensor factors (both are strict structural identities)."""
    kids = [canon(c) for c in k.term_children(t)]
    t = k.term_with_children(t, kids)
    if isinstance(t, k.Compose):
        parts = []
        for p in (t.after, t.before):
            parts.extend(compose_chain(p))
        return chain_term(parts)
    if isinstance(t, k.TensorM):
        raw = []
        for p in (t.left, t.right):
            raw.extend(tensor_chain(p))
        merged = []
        for p in raw:
            if isinstance(p, k.Id) and k.strictify(p.obj) == k.UNIT:
                continue
            if merged and isinstance(p, k.Id) and isinstance(merged[-1], k.Id):
                merged[-1] = k.Id(k.strictify(k.Tensor(merged[-1].obj, p.obj)))
            else:
                merged.append(p)
        if not merged:
            return k.Id(k.UNIT)
        return tensor_term(merged)
    return t


# ---------------------------------------------------------------------------
# the rule catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteRule:
    """A directed law: ``apply`` returns the replacement or None."""

    name: str
    law: str
    apply: Callable[[k.MorphismTerm, k.Signature], Optional[k.MorphismTerm]]


def _split2(node):
    """node = a . rest: return (a, head-of-rest, tail-or-None)."""
    a, rest = node.after, node.before
    if isinstance(rest, k.Compose):
        return a, rest.after, rest.before
    return a, rest, None


def _join(x, tail):
    return x if tail is None else k.Compose(x, tail)


def _strict(a):
    return k.strictify(a)


def _as_name(t):
    """The morphism named by t, if t is a name (eta names the identity)."""
    if isinstance(t, k.Name):
        return t.arg
    if isinstance(t, k.Eta):
        return k.Id(t.obj)
    return None


def _as_coname(t):
    if isinstance(t, k.Coname):
        return t.arg
    if isinstance(t, k.Epsilon):
        return k.Id(t.obj)
    return None


def _r_erase_iso(node, sig):
    if isinstance(node, _ERASABLE):
        dom = k.typecheck(node, sig).dom
        return k.Id(dom)
    return None


def _r_compose_unit(node, sig):
    if not isinstance(node, k.Compose):
        return None
    if isinstance(node.after, k.Id):
        return node.before
    if isinstance(node.before, k.Id):
        return node.after
    return None


def _r_dagger_involution(node, sig):
    if isinstance(node, k.Dagger) and isinstance(node.arg, k.Dagger):
        return node.arg.arg
    return None


def _r_dagger_antihom(node, sig):
    if isinstance(node, k.Dagger) and isinstance(node.arg, k.Compose):
        g, f = node.arg.after, node.arg.before
        return k.Compose(k.Dagger(f), k.Dagger(g))
    return None


def _r_name_of_identity(node, sig):
    if isinstance(node, k.Name) and isinstance(node.arg, k.Id):
        return k.Eta(node.arg.obj)
    return None


def _r_coname_of_identity(node, sig):
    if isinstance(node, k.Coname) and isinstance(node.arg, k.Id):
        return k.Epsilon(node.arg.obj)
    return None


def _r_absorption(node, sig):
    # (1_{A*} x g) . name(f)  ->  name(g . f)
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    f = _as_name(b)
    if not isinstance(a, k.TensorM) or f is None:
        return None
    factors = tensor_chain(a)
    if len(factors) < 2 or not isinstance(factors[0], k.Id):
        return None
    g = tensor_term(factors[1:])
    try:
        jf = k.typecheck(f, sig)
        jg = k.typecheck(g, sig)
    except k.TermTypeError:
        return None
    if _strict(k.Dual(jf.dom)) != _strict(factors[0].obj) or jf.cod != jg.dom:
        return None
    return _join(k.Name(k.Compose(g, f)), tail)


def _r_backward_absorption(node, sig):
    # (g* x 1_B) . name(f)  ->  name(f . g)
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    f = _as_name(b)
    if not isinstance(a, k.TensorM) or f is None:
        return None
    factors = tensor_chain(a)
    if len(factors) != 2 or not isinstance(factors[0], k.DualM):
        return None
    if not isinstance(factors[1], k.Id):
        return None
    g = factors[0].arg
    try:
        jf = k.typecheck(f, sig)
        jg = k.typecheck(g, sig)
    except k.TermTypeError:
        return None
    if _strict(factors[1].obj) != jf.cod or jf.dom != jg.cod:
        return None
    return _join(k.Name(k.Compose(f, g)), tail)


def _r_coname_absorption(node, sig):
    # coname(f) . (h x 1_{B*})  ->  coname(f . h)
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    f = _as_coname(a)
    if f is None or not isinstance(b, k.TensorM):
        return None
    factors = tensor_chain(b)
    if len(factors) < 2 or not isinstance(factors[-1], k.Id):
        return None
    h = tensor_term(factors[:-1])
    try:
        jf = k.typecheck(f, sig)
        jh = k.typecheck(h, sig)
    except k.TermTypeError:
        return None
    if _strict(factors[-1].obj) != _strict(k.Dual(jf.cod)) or jh.cod != jf.dom:
        return None
    return _join(k.Coname(k.Compose(f, h)), tail)


def _r_coname_backward_absorption(node, sig):
    # coname(f) . (1_A x g*)  ->  coname(g . f)
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    f = _as_coname(a)
    if f is None or not isinstance(b, k.TensorM):
        return None
    factors = tensor_chain(b)
    if len(factors) != 2 or not isinstance(factors[0], k.Id):
        return None
    if not isinstance(factors[1], k.DualM):
        return None
    g = factors[1].arg
    try:
        jf = k.typecheck(f, sig)
        jg = k.typecheck(g, sig)
    except k.TermTypeError:
        return None
    if _strict(factors[0].obj) != jf.dom or jg.dom != jf.cod:
        return None
    return _join(k.Coname(k.Compose(g, f)), tail)


def _r_compositionality(node, sig):
    # (coname(f) x 1_C) . (1_A x name(g))  ->  g . f
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    if not (isinstance(a, k.TensorM) and isinstance(b, k.TensorM)):
        return None
    fa = tensor_chain(a)
    fb = tensor_chain(b)
    if len(fa) != 2 or len(fb) != 2:
        return None
    f = _as_coname(fa[0])
    g = _as_name(fb[1])
    if f is None or g is None or not isinstance(fa[1], k.Id):
        return None
    if not isinstance(fb[0], k.Id):
        return None
    try:
        jf = k.typecheck(f, sig)
        jg = k.typecheck(g, sig)
    except k.TermTypeError:
        return None
    if _strict(fb[0].obj) != jf.dom or _strict(fa[1].obj) != jg.cod:
        return None
    if jf.cod != jg.dom:
        return None
    return _join(k.Compose(g, f), tail)


def _r_compositional_cut(node, sig):
    # (1_{A*} x coname(g) x 1_D) . (name(f) x name(h))  ->  name(h . g . f)
    if not isinstance(node, k.Compose):
        return None
    a, b, tail = _split2(node)
    if not (isinstance(a, k.TensorM) and isinstance(b, k.TensorM)):
        return None
    fa = tensor_chain(a)
    fb = tensor_chain(b)
    if len(fa) != 3 or len(fb) != 2:
        return None
    g = _as_coname(fa[1])
    f = _as_name(fb[0])
    h = _as_name(fb[1])
    if g is None or f is None or h is None:
        return None
    if not (isinstance(fa[0], k.Id) and isinstance(fa[2], k.Id)):
        return None
    try:
        jf = k.typecheck(f, sig)
        jg = k.typecheck(g, sig)
        jh = k.typecheck(h, sig)
    except k.TermTypeError:
        return None
    if _strict(fa[0].obj) != _strict(k.Dual(jf.dom)):
        return None
    if _strict(fa[2].obj) != jh.cod:
        return None
    if jf.cod != jg.dom or jg.cod != jh.dom:
        return None
    return _join(k.Name(k.Compose(h, k.Compose(g, f))), tail)


def _r_ketbra_idempotence(node, sig):
    # psi . psi+ . psi . psi+  ->  <psi|psi> . (psi . psi+)
    if not isinstance(node, k.Compose):
        return None
    chain = compose_chain(node)
    if len(chain) < 4:
        return None
    p1, d1, p2, d2 = chain[:4]
    tail_parts = chain[4:]
    if not (isinstance(d1, k.Dagger) and isinstance(d2, k.Dagger)):
        return None
    if p1 != p2 or d1.arg != p1 or d2.arg != p1:
        return None
    try:
        j = k.typecheck(p1, sig)
    except k.TermTypeError:
        return None
    if j.dom != k.UNIT:
        return None
    # the scalar <psi|psi> acts by tensoring on the left (strictly I x A = A)
    braket = k.Compose(k.Dagger(p1), p1)
    ketbra = k.Compose(p1, k.Dagger(p1))
    out = k.TensorM(braket, ketbra)
    if tail_parts:
        return chain_term([out] + tail_parts)
    return out


CATALOG = (
    RewriteRule("structural-iso-erasure",
                "lam/rho/alpha/udual/bdual/ddual -> 1", _r_erase_iso),
    RewriteRule("composition-unit", "1.f -> f, f.1 -> f", _r_compose_unit),
    RewriteRule("dagger-involution", "f++ -> f", _r_dagger_involution),
    RewriteRule("dagger-antihomomorphism", "(g.f)+ -> f+.g+",
                _r_dagger_antihom),
    RewriteRule("name-of-identity", "name(1_A) -> eta_A", _r_name_of_identity),
    RewriteRule("coname-of-identity", "coname(1_A) -> eps_A",
                _r_coname_of_identity),
    RewriteRule("absorption", "(1 x g).name(f) -> name(g.f)", _r_absorption),
    RewriteRule("backward-absorption", "(g* x 1).name(f) -> name(f.g)",
                _r_backward_absorption),
    RewriteRule("coname-absorption", "coname(f).(h x 1) -> coname(f.h)",
                _r_coname_absorption),
    RewriteRule("coname-backward-absorption",
                "coname(f).(1 x g*) -> coname(g.f)",
                _r_coname_backward_absorption),
    RewriteRule("compositionality",
                "(coname(f) x 1).(1 x name(g)) -> g.f", _r_compositionality),
    RewriteRule("compositional-cut",
                "(1 x coname(g) x 1).(name(f) x name(h)) -> name(h.g.f)",
                _r_compositional_cut),
    RewriteRule("ketbra-idempotence",
                "psi.psi+.psi.psi+ -> <psi|psi>.(psi.psi+)",
                _r_ketbra_idempotence),
)

RULES_BY_NAME = {r.name: r for r in CATALOG}


# ---------------------------------------------------------------------------
# application and normalisation
# ---------------------------------------------------------------------------


def apply_rule(t: k.MorphismTerm, rule: RewriteRule, path: Path,
               sig: k.Signature) -> k.MorphismTerm:
    """Apply one rule at one position of the canonicalised term.

    The result typechecks with the same judgment as the input; a failed
    match raises RewriteError.
    """
    before = k.typecheck(t, sig)
    t = canon(t)
    node = k.subterm_at(t, path.steps)
    replacement = rule.apply(node, sig)
    if replacement is None:
        raise RewriteError(f"rule {rule.name!r} does not match at {path.steps}")
    out = k.replace_at(t, path.steps, replacement)
    after = k.typecheck(out, sig)
    if after != before:
        raise RewriteError(
            f"rule {rule.name!r} changed the judgment from {before} to {after}")
    return out


_MAX_STEPS = 100_000


def normalize(t: k.MorphismTerm, sig: k.Signature) -> k.MorphismTerm:
    """Apply the catalog innermost-first, left to right, to a fixpoint."""
    budget = [_MAX_STEPS]
    done = {}

    def norm(u):
        if u in done:
            return done[u]
        orig = u
        while True:
            kids = [norm(c) for c in k.term_children(u)]
            u = canon(k.term_with_children(u, kids))
            fired = None
            for rule in CATALOG:
                fired = rule.apply(u, sig)
                if fired is not None:
                    break
            if fired is None:
                done[orig] = u
                return u
            budget[0] -= 1
            if budget[0] <= 0:
                raise RewriteError("rewrite step budget exhausted")
            u = canon(fired)

    return norm(canon(t))


def semantic_equal(t1: k.MorphismTerm, t2: k.MorphismTerm, model: Model) -> bool:
    """Exact denotational equality in a model (the oracle for every law)."""
    j1 = k.typecheck(t1, model.signature)
    j2 = k.typecheck(t2, model.signature)
    if j1 != j2:
        raise k.TermTypeError(f"judgments differ: {j1} versus {j2}")
    return evaluate(t1, model) == evaluate(t2, model)
