"""Protocol diagrams as terms, and their exact verification.

Each protocol is built twice: a specification side (the weighted
diagonal expressing "the input reaches every branch") and an
implementation side transcribed stage by stage from the corresponding
commuting diagram.  Correctness of a protocol is exact equality of the
two evaluated matrices in the chosen model.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import kernel as k
from .matrix import Matrix, Model, evaluate, inner_product
from .models import standard_model
from .scalars import EXACT, HALF_SQRT2, QiSqrt2

Q = k.GenObj("Q")
QSTAR = k.Dual(Q)
UNIT4 = tuple([k.UNIT] * 4)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    """Outcome of one exact check: equality flag plus a witness if not."""

    case: str
    model: str
    lhs_shape: Tuple[int, int]
    rhs_shape: Tuple[int, int]
    equal: bool
    witness: Optional[str] = None
    ms: float = 0.0

    def to_json(self):
        out = {
            "case": self.case,
            "model": self.model,
            "equal": self.equal,
            "lhs_shape": list(self.lhs_shape),
            "rhs_shape": list(self.rhs_shape),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        out["ms"] = self.ms
        return out


def compare_matrices(case, model_name, lhs: Matrix, rhs: Matrix,
                     started=None) -> VerificationReport:
    diff = lhs.first_difference(rhs)
    ms = 0.0 if started is None else (time.perf_counter() - started) * 1000.0
    witness = None
    if diff is not None:
        i, j, x, y = diff
        witness = (f"first difference at ({i},{j}): "
                   f"{lhs.sr.fmt(x)} versus {rhs.sr.fmt(y)}")
    return VerificationReport(case, model_name, lhs.shape, rhs.shape,
                              diff is None, witness, round(ms, 3))


# ---------------------------------------------------------------------------
# term-building helpers
# ---------------------------------------------------------------------------


def dsum_term(parts: Sequence[k.MorphismTerm], sig: k.Signature) -> k.MorphismTerm:
    """f_1 + ... + f_n as the copairing of injected components."""
    cods = [k.typecheck(p, sig).cod for p in parts]
    return k.Copair(tuple(
        k.Compose(k.Inj(i + 1, tuple(cods)), p) for i, p in enumerate(parts)))


def factor_perm_term(factors: Sequence[k.ObjectExpr],
                     target: Sequence[int]) -> k.MorphismTerm:
    """The permutation of tensor factors, built from adjacent symmetries:
    ``target[i]`` is the domain position that lands in codomain slot i."""
    order = list(range(len(factors)))
    objs = list(factors)
    stages = []
    # bubble the target order into place with adjacent swaps
    for slot in range(len(target)):
        pos = order.index(target[slot])
        while pos > slot:
            left, right = objs[pos - 1], objs[pos]
            swap = k.Sigma(left, right)
            pre = objs[:pos - 1]
            post = objs[pos + 1:]
            stage = swap
            if pre:
                stage = k.TensorM(k.Id(k.tensor_of(pre)), stage)
            if post:
                stage = k.TensorM(stage, k.Id(k.tensor_of(post)))
            stages.append(stage)
            objs[pos - 1], objs[pos] = objs[pos], objs[pos - 1]
            order[pos - 1], order[pos] = order[pos], order[pos - 1]
            pos -= 1
    if not stages:
        return k.Id(k.tensor_of(objs))
    out = stages[0]
    for stage in stages[1:]:
        out = k.Compose(stage, out)
    return out


def scaled_pair(scalar: QiSqrt2, body: k.MorphismTerm, n: int) -> k.MorphismTerm:
    """<scalar . body>_{i=1..n} : the weighted diagonal column."""
    return k.Pair(tuple(k.ScalarMul(scalar, body) for _ in range(n)))


# ---------------------------------------------------------------------------
# teleportation base
# ---------------------------------------------------------------------------


@dataclass
class TeleportationBase:
    """A scalar s with 2 s+ s = 1, a prebase 4.I -> Q* x Q whose columns
    are the names of the four correction maps, and those maps."""

    s: QiSqrt2
    prebase: Matrix
    base_t: Matrix
    betas: List[Matrix] = field(default_factory=list)


def _beta_from_column(prebase: Matrix, j: int) -> Matrix:
    # column j is name(beta_j): entry k*2 + i holds beta_j[i, k]
    sr = prebase.sr
    m = Matrix.zeros(sr, 2, 2)
    for kk in range(2):
        for i in range(2):
            m.data[i * 2 + kk] = prebase.entry(kk * 2 + i, j)
    return m


def make_bell_base(model: Optional[Model] = None) -> TeleportationBase:
    """The Bell teleportation base: s = 1/sqrt2, prebase columns the names
    of the identity, the bit flip, the phase flip and their composite."""
    model = model or standard_model("fdhilb-exact")
    sr = model.sr
    prebase = Matrix.zeros(sr, 4, 4)
    for j, gname in enumerate(("beta1", "beta2", "beta3", "beta4")):
        col = evaluate(k.Name(k.GenMor(gname)), model)
        for i in range(4):
            prebase.data[i * 4 + j] = col.entry(i, 0)
    s = HALF_SQRT2
    base_t = prebase.scale(sr.from_exact(s))
    betas = [_beta_from_column(prebase, j) for j in range(4)]
    report = validate_teleportation_base(prebase, s, model)
    if not report.equal:
        raise AssertionError(f"built-in base failed validation: {report.witness}")
    return TeleportationBase(s, prebase, base_t, betas)


def _is_unitary(m: Matrix) -> bool:
    if m.rows != m.cols:
        return False
    eye = Matrix.identity(m.sr, m.rows)
    return (m @ m.dagger()) == eye and (m.dagger() @ m) == eye


def validate_teleportation_base(prebase: Matrix, s,
                                model: Optional[Model] = None,
                                case: str = "teleportation-base") -> VerificationReport:
    """Check the three defining conditions: s . prebase unitary, every
    derived correction map unitary, and 2 s+ s = 1."""
    model = model or standard_model("fdhilb-exact")
    sr = model.sr
    started = time.perf_counter()
    if prebase.shape != (4, 4):
        return VerificationReport(case, model.name, prebase.shape, (4, 4),
                                  False, "prebase must be 4x4")
    sv = sr.from_exact(s) if isinstance(s, QiSqrt2) and sr is not EXACT else s
    failures = []
    if not _is_unitary(prebase.scale(sv)):
        failures.append("s . prebase is not unitary")
    for j in range(4):
        if not _is_unitary(_beta_from_column(prebase, j)):
            failures.append(f"correction map {j + 1} is not unitary")
    two_ss = sr.add(sr.mul(sr.dagger(sv), sv), sr.mul(sr.dagger(sv), sv))
    if not sr.eq(two_ss, sr.one()):
        failures.append("2 s+ s is not 1")
    ms = (time.perf_counter() - started) * 1000.0
    return VerificationReport(case, model.name, prebase.shape, prebase.shape,
                              not failures,
                              "; ".join(failures) if failures else None,
                              round(ms, 3))


def rel_prebase_search() -> Tuple[int, int]:
    """Exhaustively reject every candidate teleportation base in the
    relational model: all 24 permutation prebases times both Boolean
    scalars.  Returns (number of candidates, number of rejections)."""
    model = standard_model("rel")
    sr = model.sr
    tried = rejected = 0
    for perm in itertools.permutations(range(4)):
        prebase = Matrix.permutation(sr, list(perm))
        for s in (0, 1):
            tried += 1
            report = validate_teleportation_base(prebase, s, model)
            if not report.equal:
                rejected += 1
    return tried, rejected


# ---------------------------------------------------------------------------
# teleportation
# ---------------------------------------------------------------------------


_BETAS = ("beta1", "beta2", "beta3", "beta4")


def _betas(model):
    return [k.GenMor(nme) for nme in _BETAS]


def _observation(model, conames, s_dag) -> k.MorphismTerm:
    """The observation against four branches: <s+ . coname(b_i)>_{i=1..4}."""
    return k.Pair(tuple(k.ScalarMul(s_dag, k.Coname(b)) for b in conames))


def _communication4(carried: k.ObjectExpr, sig) -> k.MorphismTerm:
    """(4 . lam^-1) . upsilon : (4.I) x C -> 4.C, with upsilon the left
    distributivity written as the pairing of projections."""
    upsilon = k.Pair(tuple(
        k.TensorM(k.Proj(i + 1, UNIT4), k.Id(carried)) for i in range(4)))
    lam4 = dsum_term([k.LambdaInv(carried)] * 4, sig)
    return k.Compose(lam4, upsilon)


def build_teleportation(model: Optional[Model] = None):
    """Specification and implementation of the teleportation diagram.

    The specification side is the weighted diagonal (the input qubit is
    propagated to the output with weight s+ s in all four branches); the
    implementation side is the six-stage composite: import, entangled
    pair, relocation, observation, communication, correction.
    """
    model = model or standard_model("fdhilb-exact")
    sig = model.signature
    s = HALF_SQRT2
    ss = s.conj() * s
    lhs = scaled_pair(ss, k.Id(Q), 4)

    betas = _betas(model)
    import_state = k.Rho(Q)
    epr = k.TensorM(k.Id(Q), k.ScalarMul(s, k.Name(k.Id(Q))))
    relocate = k.Alpha(Q, QSTAR, Q)
    observe = k.TensorM(_observation(model, betas, s.conj()), k.Id(Q))
    communicate = _communication4(Q, sig)
    correct = dsum_term([k.Dagger(b) for b in betas], sig)
    rhs = k.Compose(correct, k.Compose(communicate, k.Compose(
        observe, k.Compose(relocate, k.Compose(epr, import_state)))))
    return lhs, rhs


# ---------------------------------------------------------------------------
# logic-gate teleportation
# ---------------------------------------------------------------------------


def unitary_corrections(f: Matrix, base: Optional[TeleportationBase] = None):
    """The four corrections phi_i(f) = f . beta_i . f+ for unitary f;
    each satisfies f . beta_i = phi_i(f) . f and is unitary."""
    if not _is_unitary(f):
        raise ValueError("corrections are defined for unitary maps only")
    base = base or make_bell_base()
    out = []
    for b in base.betas:
        phi = f @ b @ f.dagger()
        if (f @ b).first_difference(phi @ f) is not None:
            raise AssertionError("correction fails its defining equation")
        out.append(phi)
    return out


def build_logic_gate_teleportation(f: Matrix, model: Optional[Model] = None,
                                   gen_name: str = "lgt_f"):
    """Teleportation that applies a unitary f in flight.

    Returns (lhs, rhs, model') where model' extends the standard model
    with generators for f and its four corrections.
    """
    model = model or standard_model("fdhilb-exact")
    if f.sr is not model.sr:
        raise ValueError("gate matrix must live in the model's semiring")
    phis = unitary_corrections(f)
    morphisms = {gen_name: k.MorGen(Q, Q, tuple(f.data))}
    for i, phi in enumerate(phis):
        morphisms[f"{gen_name}_phi{i + 1}"] = k.MorGen(Q, Q, tuple(phi.data))
    model2 = model.extend(morphisms=morphisms)
    sig = model2.signature

    s = HALF_SQRT2
    ss = s.conj() * s
    lhs = k.Compose(scaled_pair(ss, k.Id(Q), 4), k.GenMor(gen_name))

    betas = _betas(model2)
    import_state = k.Rho(Q)
    produce_f_state = k.TensorM(
        k.Id(Q), k.ScalarMul(s, k.Name(k.GenMor(gen_name))))
    relocate = k.Alpha(Q, QSTAR, Q)
    observe = k.TensorM(_observation(model2, betas, s.conj()), k.Id(Q))
    communicate = _communication4(Q, sig)
    correct = dsum_term(
        [k.Dagger(k.GenMor(f"{gen_name}_phi{i + 1}")) for i in range(4)], sig)
    rhs = k.Compose(correct, k.Compose(communicate, k.Compose(
        observe, k.Compose(relocate, k.Compose(produce_f_state, import_state)))))
    return lhs, rhs, model2


# ---------------------------------------------------------------------------
# CNOT teleportation
# ---------------------------------------------------------------------------

QQ = k.Tensor(Q, Q)

_CNOT_RELATIONS = (
    ("CNOT.(b2 x 1) = (b2 x b2).CNOT", ("beta2", None), ("beta2", "beta2")),
    ("CNOT.(1 x b2) = (1 x b2).CNOT", (None, "beta2"), (None, "beta2")),
    ("CNOT.(b3 x 1) = (b3 x 1).CNOT", ("beta3", None), ("beta3", None)),
    ("CNOT.(1 x b3) = (b3 x b3).CNOT", (None, "beta3"), ("beta3", "beta3")),
    ("CNOT.(b4 x 1) = (b4 x b2).CNOT", ("beta4", None), ("beta4", "beta2")),
    ("CNOT.(1 x b4) = (b3 x b4).CNOT", (None, "beta4"), ("beta3", "beta4")),
)

# single-leg factors of the corrections: phi_1 from first-leg actions,
# phi_2 from second-leg actions, read off the relations above
_PHI1 = ((None, None), ("beta2", "beta2"), ("beta3", None), ("beta4", "beta2"))
_PHI2 = ((None, None), (None, "beta2"), ("beta3", "beta3"), ("beta3", "beta4"))


def _leg_pair(spec) -> k.MorphismTerm:
    a, b = spec
    ta = k.GenMor(a) if a else k.Id(Q)
    tb = k.GenMor(b) if b else k.Id(Q)
    return k.TensorM(ta, tb)


def cnot_relations(model: Optional[Model] = None):
    """Evaluate the six commutation relations; returns (description, holds)."""
    model = model or standard_model("fdhilb-exact")
    cnot = evaluate(k.GenMor("CNOT"), model)
    out = []
    for desc, pre, post in _CNOT_RELATIONS:
        lhs = cnot @ evaluate(_leg_pair(pre), model)
        rhs = evaluate(_leg_pair(post), model) @ cnot
        out.append((desc, lhs.first_difference(rhs) is None))
    return out


def build_cnot_teleportation(model: Optional[Model] = None):
    """Teleportation of the CNOT gate across two qubit pairs.

    The relocation stage is the permutation bringing the factor order
    a1 a2 b1* b2* c1 c2 to (a1 b1*) (c1 c2) (a2 b2*); the two observation
    and correction rounds then act on adjacent pairs.
    """
    model = model or standard_model("fdhilb-exact")
    bad = [desc for desc, ok in cnot_relations(model) if not ok]
    if bad:
        raise ValueError("declared CNOT violates: " + "; ".join(bad))
    sig = model.signature
    s = HALF_SQRT2
    ss = s.conj() * s

    lhs = k.Compose(
        k.Pair(tuple(k.ScalarMul(ss, scaled_pair(ss, k.Id(QQ), 4))
                     for _ in range(4))),
        k.GenMor("CNOT"))

    betas = _betas(model)
    import_state = k.Rho(QQ)
    produce = k.TensorM(k.Id(QQ), k.ScalarMul(s * s, k.Name(k.GenMor("CNOT"))))
    # factors after producing the gate state: a1 a2 b1* b2* c1 c2
    factors = [Q, Q, QSTAR, QSTAR, Q, Q]
    relocate = factor_perm_term(factors, [0, 2, 4, 5, 1, 3])
    tail = k.Tensor(Q, QSTAR)     # a2 x b2*
    observe1 = k.TensorM(
        k.TensorM(_observation(model, betas, s.conj()), k.Id(QQ)), k.Id(tail))
    communicate1 = k.TensorM(_communication4(QQ, sig), k.Id(tail))
    correct1 = k.TensorM(
        dsum_term([k.Dagger(_leg_pair(p)) for p in _PHI1], sig), k.Id(tail))
    four_qq = k.n_copies(4, QQ)
    observe2 = k.TensorM(k.Id(four_qq), _observation(model, betas, s.conj()))
    tau = k.Pair(tuple(
        k.TensorM(k.Id(four_qq), k.Proj(i + 1, UNIT4)) for i in range(4)))
    communicate2 = k.Compose(dsum_term([k.RhoInv(four_qq)] * 4, sig), tau)
    correct2 = dsum_term(
        [dsum_term([k.Dagger(_leg_pair(p))] * 4, sig) for p in _PHI2], sig)

    rhs = import_state
    for stage in (produce, relocate, observe1, communicate1, correct1,
                  observe2, communicate2, correct2):
        rhs = k.Compose(stage, rhs)
    return lhs, rhs


# ---------------------------------------------------------------------------
# entanglement swapping
# ---------------------------------------------------------------------------


def swap_measurement_branches(model: Optional[Model] = None):
    """The four bipartite projector terms P_i = s+s . name(g_i).coname(b_i)
    with g_i the conjugate of b_i; each is idempotent and self-adjoint."""
    model = model or standard_model("fdhilb-exact")
    s = HALF_SQRT2
    ss = s.conj() * s
    out = []
    for b in _betas(model):
        out.append(k.ScalarMul(ss, k.Compose(k.Name(k.ConjM(b)), k.Coname(b))))
    return out


def build_entanglement_swapping(model: Optional[Model] = None):
    """Two entangled pairs, a measurement in the middle, and corrections
    that leave the outer pair entangled.

    The correction on the surviving left leg is the dual of the inverse
    conjugate map: strict typing forces the coercion (the raw inverse
    lives on Q*, the leg is Q), and it is exactly what makes the fourth
    branch close up.
    """
    model = model or standard_model("fdhilb-exact")
    sig = model.signature
    s = HALF_SQRT2
    ss = s.conj() * s
    w = s.conj() * s * s * s       # weight of each specification branch

    pair_names = k.TensorM(k.Name(k.Id(Q)), k.Name(k.Id(Q)))
    lhs = k.Pair(tuple(k.ScalarMul(w, pair_names) for _ in range(4)))

    produce = k.ScalarMul(s * s, k.TensorM(k.Name(k.Id(Q)), k.Name(k.Id(Q))))
    relocate = k.Alpha(k.Tensor(QSTAR, Q), QSTAR, Q)
    measure = k.TensorM(
        k.Id(QSTAR),
        k.TensorM(k.Pair(tuple(swap_measurement_branches(model))), k.Id(Q)))
    mid = k.Tensor(Q, QSTAR)       # a x b*
    tau = k.Pair(tuple(
        k.TensorM(k.Id(QSTAR), k.TensorM(k.Proj(i + 1, tuple([mid] * 4)),
                                         k.Id(Q))) for i in range(4)))
    reorder = dsum_term(
        [factor_perm_term([QSTAR, Q, QSTAR, Q], [2, 1, 0, 3])] * 4, sig)
    communicate = k.Compose(reorder, tau)
    corrections = []
    for b in _betas(model):
        g_inv_on_q = k.DualM(k.Dagger(k.ConjM(b)))
        corrections.append(k.TensorM(
            k.TensorM(k.Id(QSTAR), g_inv_on_q),
            k.TensorM(k.Id(QSTAR), k.Dagger(b))))
    correct = dsum_term(corrections, sig)

    rhs = produce
    for stage in (relocate, measure, communicate, correct):
        rhs = k.Compose(stage, rhs)
    return lhs, rhs


# ---------------------------------------------------------------------------
# the Born rule
# ---------------------------------------------------------------------------


def born_amplitudes(u: Matrix, psi: Matrix, parts: Optional[Sequence[int]] = None):
    """Branch amplitudes pi_j . psi of an observation u against psi."""
    if not _is_unitary(u):
        raise ValueError("spectral decompositions are unitary")
    if psi.cols != 1 or psi.rows != u.cols:
        raise ValueError(f"state shape {psi.shape} does not match {u.shape}")
    sr = psi.sr
    norm = inner_product(psi, psi)
    if not sr.eq(norm, sr.one()):
        raise ValueError("state is not normalised")
    parts = list(parts) if parts is not None else [1] * u.rows
    if sum(parts) != u.rows:
        raise ValueError("part dimensions do not sum to the total dimension")
    image = u @ psi
    out = []
    off = 0
    for d in parts:
        out.append(Matrix(sr, d, 1, image.data[off:off + d]))
        off += d
    return out


def born_probabilities(u: Matrix, psi: Matrix,
                       parts: Optional[Sequence[int]] = None):
    """Probabilities psi+ P_j psi of each branch of the measurement
    induced by u; each is a self-adjoint scalar and they sum to one.
    Probabilities equal amplitude-squares s_j+ s_j."""
    sr = psi.sr
    amps = born_amplitudes(u, psi, parts)
    parts = [a.rows for a in amps]
    projs = spectral_projector_matrices(u, parts)
    probs = []
    for amp, proj in zip(amps, projs):
        p = (psi.dagger() @ proj @ psi).entry(0, 0)
        if not sr.eq(p, inner_product(amp, amp)):
            raise AssertionError("projector and amplitude forms disagree")
        probs.append(p)
    return probs


def spectral_projector_matrices(u: Matrix, parts: Sequence[int]):
    """P_j = u+ q_j p_j u for each summand of the decomposition."""
    sr = u.sr
    n = u.rows
    out = []
    off = 0
    for d in parts:
        sel = Matrix.zeros(sr, n, n)
        one = sr.one()
        for i in range(off, off + d):
            sel.data[i * n + i] = one
        out.append(u.dagger() @ sel @ u)
        off += d
    return out
