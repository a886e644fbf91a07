import random

import pytest

from catqm import dsl, kernel as k
from catqm.dsl import DslParseError
from catqm.models import standard_model, standard_signature
from catqm.scalars import HALF_SQRT2
from helpers import random_typed_term

SIG = standard_signature()
M = standard_model("fdhilb-exact")
Q = k.GenObj("Q")


def test_parse_examples():
    t = dsl.parse_term("(o (eps Q) (sg (dual Q) Q))")
    j = k.typecheck(t, SIG)
    assert j == k.TypeJudgment(k.Tensor(k.Dual(Q), Q), k.UNIT)

    name_id = dsl.parse_term("(name (id Q))")
    from catqm.rewrite import semantic_equal
    assert semantic_equal(name_id, dsl.parse_term("(eta Q)"), M)


def test_parse_error_carries_position_and_expectations():
    with pytest.raises(DslParseError) as err:
        dsl.parse_term("(o g")
    assert err.value.expected == (")",)
    with pytest.raises(DslParseError) as err:
        dsl.parse_term("(frobnicate Q)")
    assert err.value.line == 1
    assert "eta" in err.value.expected

    with pytest.raises(DslParseError) as err:
        dsl.parse_term("(id (what Q))")
    assert "ten" in err.value.expected


def test_scalar_literals_in_terms():
    t = dsl.parse_term("(sc 1/2*r2 (id Q))")
    assert isinstance(t, k.ScalarMul)
    assert t.scalar == HALF_SQRT2
    with pytest.raises(DslParseError):
        dsl.parse_term("(sc 1//2 (id Q))")


def test_nary_forms_fold():
    t = dsl.parse_term("(o (id Q) (id Q) (id Q))")
    assert t == k.Compose(k.Id(Q), k.Compose(k.Id(Q), k.Id(Q)))
    t = dsl.parse_term("(x (id Q) (id Q) (id Q))")
    assert t == k.TensorM(k.Id(Q), k.TensorM(k.Id(Q), k.Id(Q)))
    obj = dsl.parse_term("(id (sum Q Q Q))").obj
    assert obj == k.Biprod(k.Biprod(Q, Q), Q)


def test_inj_proj_indices():
    t = dsl.parse_term("(inj 2 (sum Q Q (I)))")
    assert t == k.Inj(2, (Q, Q, k.UNIT))
    with pytest.raises(k.TermTypeError):
        k.typecheck(dsl.parse_term("(inj 4 (sum Q Q))"), SIG)


def test_document_with_defs_and_signature():
    text = """
    ; a custom generator and a named preparation
    (object R 3)
    (morphism rotate R R (matrix (row 0 1 0) (row 0 0 1) (row 1 0 0)))
    (def epr (sc 1/2*r2 (name (id Q))))
    (term (x epr (gen rotate)))
    """
    doc = dsl.parse_document(text)
    sig = standard_signature().extended(doc.signature.objects,
                                        doc.signature.morphisms)
    assert doc.signature.objects["R"] == 3
    assert "rotate" in doc.signature.morphisms
    j = k.typecheck(doc.entry, sig)
    assert j.dom == k.GenObj("R")


def test_document_rejects_bad_matrix():
    with pytest.raises(DslParseError):
        dsl.parse_document(
            "(object R 2)\n(morphism f R R (matrix (row 1 0)))")
    with pytest.raises(DslParseError):
        dsl.parse_document(
            "(object R 2)\n(morphism f R R (matrix (row 1 0) (row 1)))")


def test_print_parse_round_trip_on_random_terms():
    rng = random.Random(61)
    for _ in range(200):
        t, _ = random_typed_term(rng, steps=8)
        text = dsl.print_term(t)
        assert dsl.parse_term(text) == t


def test_print_parse_round_trip_structural_isos():
    for text in ("(lam Q)", "(rho-inv (ten Q Q))", "(alpha Q Q Q)",
                 "(udual)", "(bdual Q Q)", "(ddual-inv Q)",
                 "(distR Q Q (I))", "(distL-inv Q (I) Q)",
                 "(zero-m Q (zero))", "(proj 1 (sum Q (I)))",
                 "(copair (id Q) (id Q))", "(plus (id Q) (id Q))",
                 "(conj (gen H))", "(dualm (gen H))"):
        t = dsl.parse_term(text)
        assert dsl.print_term(t) == text


def test_document_round_trip():
    text = """
    (object R 2)
    (morphism f R R (matrix (row 1 i) (row -1/2*r2 0)))
    (def v (name (gen f)))
    (term (o (dg v) v))
    """
    doc = dsl.parse_document(text)
    printed = dsl.print_document(doc)
    doc2 = dsl.parse_document(printed)
    assert dsl.print_document(doc2) == printed
    assert doc2.entry == doc.entry
    assert doc2.signature.morphisms["f"].entries == doc.signature.morphisms["f"].entries


def test_comments_are_ignored():
    t = dsl.parse_term("(id ; inline note\n Q)")
    assert t == k.Id(Q)
