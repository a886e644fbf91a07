import random
from fractions import Fraction

import pytest

from catqm import kernel as k
from catqm import protocols as P
from catqm.matrix import Matrix, evaluate, kron
from catqm.models import standard_model
from catqm.scalars import EXACT, HALF_SQRT2, ONE, QiSqrt2

M = standard_model("fdhilb-exact")
Q = k.GenObj("Q")
HALF = QiSqrt2(Fraction(1, 2))
QUARTER = QiSqrt2(Fraction(1, 4))


def test_bell_prebase_matches_the_four_by_four_matrix():
    base = P.make_bell_base(M)
    expected = [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [0, 1, 0, -1],
        [1, 0, -1, 0],
    ]
    for i in range(4):
        for j in range(4):
            assert base.prebase.entry(i, j) == QiSqrt2(expected[i][j])


def test_bell_base_satisfies_definition():
    base = P.make_bell_base(M)
    assert P._is_unitary(base.base_t)
    for b in base.betas:
        assert P._is_unitary(b)
    assert QiSqrt2(2) * base.s.conj() * base.s == ONE
    # base equations: b1 = 1, b2 = bit flip, b3 self-adjoint, b4 = b2 . b3
    assert base.betas[0] == Matrix.identity(EXACT, 2)
    assert base.betas[1] == evaluate(k.GenMor("beta2"), M)
    assert base.betas[2].dagger() == base.betas[2]
    assert base.betas[1] @ base.betas[2] == base.betas[3]


def test_beta4_inverse_factors_through_the_flip():
    base = P.make_bell_base(M)
    b2, b3, b4 = base.betas[1], base.betas[2], base.betas[3]
    assert b3 @ b2 == b4.dagger()
    assert b4 @ b4 == Matrix.identity(EXACT, 2).scale(-ONE)


def test_validate_rejects_bad_scalar():
    base = P.make_bell_base(M)
    report = P.validate_teleportation_base(base.prebase, ONE, M)
    assert not report.equal
    assert "unitary" in report.witness and "2 s+ s" in report.witness


def test_rel_has_no_teleportation_base():
    tried, rejected = P.rel_prebase_search()
    assert tried == 48
    assert rejected == 48


def test_teleportation_diagram_commutes():
    lhs, rhs = P.build_teleportation(M)
    L = evaluate(lhs, M)
    R = evaluate(rhs, M)
    assert L == R
    assert L.shape == (8, 2)
    # the specification side: four half-weighted identities stacked
    for block in range(4):
        for i in range(2):
            for j in range(2):
                expect = HALF if i == j else QiSqrt2(0)
                assert L.entry(block * 2 + i, j) == expect


def test_teleportation_branch_probabilities():
    s = HALF_SQRT2
    ss = s.conj() * s
    prob = ss.conj() * ss
    assert prob == QUARTER
    total = sum((prob for _ in range(4)), QiSqrt2(0))
    assert total == ONE


def test_unitary_corrections_satisfy_defining_equation():
    base = P.make_bell_base(M)
    h = evaluate(k.GenMor("H"), M)
    phis = P.unitary_corrections(h)
    for beta, phi in zip(base.betas, phis):
        assert h @ beta == phi @ h
        assert P._is_unitary(phi)
    # phi_2(H) is the phase flip
    assert phis[1] == evaluate(k.GenMor("beta3"), M)
    # phi_i(1) = beta_i
    eye = Matrix.identity(EXACT, 2)
    assert P.unitary_corrections(eye) == base.betas


def test_unitary_corrections_reject_non_unitary():
    bad = Matrix(EXACT, 2, 2, [ONE, ONE, ONE, ONE])
    with pytest.raises(ValueError):
        P.unitary_corrections(bad)


def test_logic_gate_teleportation_for_each_gate():
    for gname in ("beta1", "beta2", "beta3", "beta4", "H"):
        f = evaluate(k.GenMor(gname), M)
        lhs, rhs, m2 = P.build_logic_gate_teleportation(f, M, gen_name=f"t_{gname}")
        assert evaluate(lhs, m2) == evaluate(rhs, m2)


def test_logic_gate_identity_matches_plain_teleportation():
    eye = Matrix.identity(EXACT, 2)
    lhs, rhs, m2 = P.build_logic_gate_teleportation(eye, M, gen_name="t_id")
    plain_lhs, _ = P.build_teleportation(M)
    assert evaluate(lhs, m2) == evaluate(plain_lhs, m2)


def test_logic_gate_lhs_stacks_the_gate():
    b3 = evaluate(k.GenMor("beta3"), M)
    lhs, _, m2 = P.build_logic_gate_teleportation(b3, M, gen_name="t_b3")
    L = evaluate(lhs, m2)
    for block in range(4):
        for i in range(2):
            for j in range(2):
                assert L.entry(block * 2 + i, j) == HALF * b3.entry(i, j)


def test_cnot_relations_hold():
    assert all(ok for _, ok in P.cnot_relations(M))


def test_cnot_relation_example():
    cnot = evaluate(k.GenMor("CNOT"), M)
    b3 = evaluate(k.GenMor("beta3"), M)
    eye = Matrix.identity(EXACT, 2)
    assert cnot @ kron(eye, b3) == kron(b3, b3) @ cnot


def test_cnot_builder_rejects_bad_gate():
    bad_entries = tuple(ONE if i == j else QiSqrt2(0) for i in range(4)
                        for j in range(4))
    sig = M.signature.extended(morphisms={
        "CNOT": k.MorGen(k.Tensor(Q, Q), k.Tensor(Q, Q), bad_entries)})
    from catqm.models import model_over
    m_bad = model_over("fdhilb-exact", sig)
    with pytest.raises(ValueError):
        P.build_cnot_teleportation(m_bad)


def test_cnot_teleportation_commutes():
    lhs, rhs = P.build_cnot_teleportation(M)
    L = evaluate(lhs, M)
    R = evaluate(rhs, M)
    assert L.shape == (64, 4)
    assert L == R
    cnot = evaluate(k.GenMor("CNOT"), M)
    for block in range(16):
        for i in range(4):
            for j in range(4):
                assert L.entry(block * 4 + i, j) == QUARTER * cnot.entry(i, j)


def test_swap_measurement_branches_are_projectors():
    for term in P.swap_measurement_branches(M):
        p = evaluate(term, M)
        assert p @ p == p
        assert p.dagger() == p


def test_entanglement_swapping_commutes():
    lhs, rhs = P.build_entanglement_swapping(M)
    L = evaluate(lhs, M)
    R = evaluate(rhs, M)
    assert L.shape == (64, 1)
    assert L == R
    # each branch is the quarter-weighted pair of matched-index vectors
    vec = kron(evaluate(k.Name(k.Id(Q)), M), evaluate(k.Name(k.Id(Q)), M))
    for branch in range(4):
        for i in range(16):
            assert L.entry(branch * 16 + i, 0) == QUARTER * vec.entry(i, 0)


def test_swapping_in_rel():
    rel = standard_model("rel")
    lhs, rhs = P.build_entanglement_swapping(rel)
    assert evaluate(lhs, rel) == evaluate(rhs, rel)


def test_born_probabilities_computational_basis():
    u = evaluate(k.Dagger(k.GenMor("base_Q")), M)
    e0 = Matrix.column(EXACT, [ONE, QiSqrt2(0)])
    assert P.born_probabilities(u, e0) == [ONE, QiSqrt2(0)]
    s = HALF_SQRT2
    plus = Matrix.column(EXACT, [s, s])
    assert P.born_probabilities(u, plus) == [HALF, HALF]


def test_born_probabilities_bell_measurement():
    base = P.make_bell_base(M)
    u = base.base_t.dagger()
    s = HALF_SQRT2
    epr = Matrix.column(EXACT, [s, QiSqrt2(0), QiSqrt2(0), s])
    probs = P.born_probabilities(u, epr)
    assert probs[0] == ONE
    assert all(p.is_zero for p in probs[1:])
    e0 = Matrix.column(EXACT, [ONE, QiSqrt2(0)])
    e1 = Matrix.column(EXACT, [QiSqrt2(0), ONE])
    state = kron(e0, e1)
    probs = P.born_probabilities(u, state)
    assert sum(probs, QiSqrt2(0)) == ONE
    assert probs == [QiSqrt2(0), HALF, QiSqrt2(0), HALF]


def test_born_rejects_bad_inputs():
    u = Matrix(EXACT, 2, 2, [ONE, ONE, QiSqrt2(0), ONE])
    e0 = Matrix.column(EXACT, [ONE, QiSqrt2(0)])
    with pytest.raises(ValueError):
        P.born_probabilities(u, e0)
    good = Matrix.identity(EXACT, 2)
    with pytest.raises(ValueError):
        P.born_probabilities(good, Matrix.column(EXACT, [ONE, ONE]))


def test_degenerate_parts_supported():
    u = Matrix.identity(EXACT, 4)
    s = HALF_SQRT2
    psi = Matrix.column(EXACT, [s, QiSqrt2(0), QiSqrt2(0), s])
    probs = P.born_probabilities(u, psi, parts=[2, 2])
    assert probs == [HALF, HALF]


def test_factor_perm_term_is_the_right_permutation():
    rng = random.Random(41)
    factors = [Q, k.Dual(Q), Q, k.Dual(Q)]
    target = [2, 1, 0, 3]
    term = P.factor_perm_term(factors, target)
    mat = evaluate(term, M)
    dims = [2, 2, 2, 2]
    # basis vector at multi-index (i0,i1,i2,i3) must land at (i2,i1,i0,i3)
    for idx in range(16):
        digits = [(idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1]
        out_digits = [digits[t] for t in target]
        out_idx = 0
        for d in out_digits:
            out_idx = out_idx * 2 + d
        assert mat.entry(out_idx, idx) == ONE


def test_correction_example_for_phase_flip_gate():
    b3 = evaluate(k.GenMor("beta3"), M)
    phis = P.unitary_corrections(b3)
    # conjugating the bit flip by the phase flip negates it
    assert phis[1] == Matrix(EXACT, 2, 2,
                             [QiSqrt2(0), -ONE, -ONE, QiSqrt2(0)])


def test_born_bell_measurement_on_product_with_epr_half():
    from fractions import Fraction
    base = P.make_bell_base(M)
    u = base.base_t.dagger()
    s = HALF_SQRT2
    e0 = Matrix.column(EXACT, [ONE, QiSqrt2(0)])
    half = Matrix.column(EXACT, [s, s])
    probs = P.born_probabilities(u, kron(e0, half))
    quarter = QiSqrt2(Fraction(1, 4))
    assert probs == [quarter] * 4


def test_float_model_smoke():
    mf = standard_model("fdhilb-float")
    lhs, rhs = P.build_teleportation(mf)
    assert evaluate(lhs, mf) == evaluate(rhs, mf)
    from catqm.matrix import scalar_dimension
    d = scalar_dimension(mf, k.Tensor(Q, Q))
    assert abs(d - 4.0) < 1e-9


def test_rel_candidates_fail_on_correction_unitarity():
    import itertools
    rel = standard_model("rel")
    for perm in itertools.permutations(range(4)):
        prebase = Matrix.permutation(rel.sr, list(perm))
        report = P.validate_teleportation_base(prebase, 1, rel)
        assert not report.equal
        assert "not unitary" in report.witness
