import random

import pytest

from catqm import kernel as k
from catqm.models import standard_model
from catqm.rewrite import (CATALOG, ROOT, RULES_BY_NAME, RewriteError, canon,
                           apply_rule, normalize, semantic_equal)
from helpers import rule_instance, random_typed_term

M = standard_model("fdhilb-exact")
SIG = M.signature
Q = k.GenObj("Q")

# rules whose instances are worth a quick smoke pass here; the full
# 100-instance soundness sweep lives in the acceptance suite
SEMANTIC_RULES = [r.name for r in CATALOG]


def test_absorption_example():
    f, g = k.GenMor("beta3"), k.GenMor("beta2")
    lhs = k.Compose(k.TensorM(k.Id(k.Dual(Q)), g), k.Name(f))
    out = apply_rule(lhs, RULES_BY_NAME["absorption"], ROOT, SIG)
    assert out == k.Name(k.Compose(g, f))
    assert semantic_equal(lhs, out, M)


def test_apply_rule_no_match_raises():
    with pytest.raises(RewriteError):
        apply_rule(k.Id(Q), RULES_BY_NAME["absorption"], ROOT, SIG)


def test_apply_rule_at_inner_path():
    f, g = k.GenMor("beta3"), k.GenMor("beta2")
    redex = k.Compose(k.TensorM(k.Id(k.Dual(Q)), g), k.Name(f))
    t = k.Dagger(redex)
    out = apply_rule(t, RULES_BY_NAME["absorption"], ROOT.child(0), SIG)
    assert out == k.Dagger(k.Name(k.Compose(g, f)))
    assert semantic_equal(t, out, M)


def test_compositionality_with_identities_reduces_to_identity():
    core = k.Compose(k.LambdaInv(Q), k.Compose(
        k.TensorM(k.Coname(k.Id(Q)), k.Id(Q)),
        k.Compose(k.TensorM(k.Id(Q), k.Name(k.Id(Q))), k.Rho(Q))))
    assert normalize(core, SIG) == k.Id(Q)


def test_teleportation_core_reduces_to_composite():
    # observe f and prepare g along the line: the flow is g . f
    f, g = k.GenMor("beta2"), k.GenMor("H")
    core = k.Compose(k.TensorM(k.Coname(f), k.Id(Q)),
                     k.TensorM(k.Id(Q), k.Name(g)))
    nf = normalize(core, SIG)
    assert nf == k.Compose(g, f)
    assert semantic_equal(core, nf, M)


def test_identity_chain_collapses():
    t = k.Compose(k.Id(Q), k.Compose(k.Id(Q), k.Id(Q)))
    assert normalize(t, SIG) == k.Id(Q)


def test_cut_chain_reduces_to_single_name():
    f, g, h = k.GenMor("beta2"), k.GenMor("beta3"), k.GenMor("H")
    cut = k.Compose(
        k.TensorM(k.Id(k.Dual(Q)), k.TensorM(k.Coname(g), k.Id(Q))),
        k.TensorM(k.Name(f), k.Name(h)))
    nf = normalize(cut, SIG)
    assert nf == k.Name(k.Compose(h, k.Compose(g, f)))
    assert semantic_equal(cut, nf, M)


def test_name_coname_of_identity():
    assert normalize(k.Name(k.Id(Q)), SIG) == k.Eta(Q)
    assert normalize(k.Coname(k.Id(Q)), SIG) == k.Epsilon(Q)
    # eta and name(1) have the same denotation
    assert semantic_equal(k.Name(k.Id(Q)), k.Eta(Q), M)


def test_structural_isos_erase():
    t = k.Compose(k.Lambda(Q), k.Compose(k.RhoInv(Q), k.Id(Q)))
    assert normalize(t, SIG) == k.Id(Q)


def test_type_preservation_on_random_instances():
    rng = random.Random(31)
    for name in SEMANTIC_RULES:
        for _ in range(10):
            lhs, fac = rule_instance(name, rng)
            sig = fac.signature()
            out = apply_rule(lhs, RULES_BY_NAME[name], ROOT, sig)
            assert k.typecheck(out, sig) == k.typecheck(lhs, sig)


def test_soundness_smoke_both_models():
    rng = random.Random(32)
    for name in SEMANTIC_RULES:
        for _ in range(5):
            lhs, fac = rule_instance(name, rng)
            sig = fac.signature()
            out = apply_rule(lhs, RULES_BY_NAME[name], ROOT, sig)
            for model_name in ("fdhilb-exact", "rel"):
                assert semantic_equal(lhs, out, fac.model(model_name)), (
                    f"{name} unsound in {model_name}")


def test_normalize_terminates_and_preserves_semantics():
    rng = random.Random(33)
    for _ in range(120):
        t, fac = random_typed_term(rng, steps=12)
        sig = fac.signature()
        nf = normalize(t, sig)
        assert normalize(nf, sig) == nf
        assert k.typecheck(nf, sig) == k.typecheck(t, sig)


def test_normalize_agrees_with_oracle_on_small_terms():
    rng = random.Random(34)
    checked = 0
    while checked < 40:
        t, fac = random_typed_term(rng, steps=6)
        sig = fac.signature()
        m = fac.model("fdhilb-exact")
        # keep the oracle affordable: skip terms with huge leg dimensions
        j = k.typecheck(t, sig)
        if (k.object_dim(dict(sig.objects), j.dom)
                * k.object_dim(dict(sig.objects), j.cod)) > 2000:
            continue
        nf = normalize(t, sig)
        assert semantic_equal(t, nf, m)
        checked += 1


def test_ketbra_idempotence_rule():
    rng = random.Random(35)
    lhs, fac = rule_instance("ketbra-idempotence", rng)
    sig = fac.signature()
    out = apply_rule(lhs, RULES_BY_NAME["ketbra-idempotence"], ROOT, sig)
    assert isinstance(out, k.TensorM)
    assert semantic_equal(lhs, out, fac.model("fdhilb-exact"))


def test_canon_merges_identity_factors():
    t = k.TensorM(k.Id(Q), k.TensorM(k.Id(Q), k.GenMor("beta2")))
    c = canon(t)
    assert isinstance(c, k.TensorM)
    assert c.left == k.Id(k.Tensor(Q, Q))
    t2 = k.TensorM(k.Id(k.UNIT), k.GenMor("beta2"))
    assert canon(t2) == k.GenMor("beta2")


def test_semantic_equal_distinguishes_terms():
    assert not semantic_equal(k.Id(Q), k.GenMor("beta2"), M)
    with pytest.raises(k.TermTypeError):
        semantic_equal(k.Id(Q), k.Eta(Q), M)


def test_eta_equals_flipped_counit_adjoint():
    lhs = k.Eta(Q)
    rhs = k.Compose(k.Sigma(Q, k.Dual(Q)), k.Dagger(k.Epsilon(Q)))
    assert semantic_equal(lhs, rhs, M)
    assert semantic_equal(lhs, rhs, standard_model("rel"))


def test_normalize_full_protocol_terms():
    # the engine must digest the real protocol transcriptions: terminate,
    # shrink, and preserve the denotation
    from catqm import protocols as P
    for builder in (P.build_teleportation, P.build_entanglement_swapping,
                    P.build_cnot_teleportation):
        _, rhs = builder(M)
        nf = normalize(rhs, SIG)
        assert k.term_size(nf) <= k.term_size(rhs)
        assert k.typecheck(nf, SIG) == k.typecheck(rhs, SIG)
        assert semantic_equal(rhs, nf, M)
