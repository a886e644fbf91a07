"""Derived constructions: doubling (global-phase elimination), the
superoperator construction with decoherence, basis structures with their
comonoid/Frobenius laws and the measurement coalgebra, spectral
projectors, and the concrete copying/deleting failure witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Sequence

from .matrix import Matrix, kron
from .protocols import VerificationReport, _is_unitary
from .scalars import EXACT, HALF_SQRT2, QiSqrt2, Semiring


# ---------------------------------------------------------------------------
# doubling and global phases
# ---------------------------------------------------------------------------


def wproj_double(f: Matrix) -> Matrix:
    """f |-> f (x) conj(f): the image of f in the projective (doubled)
    category.  Functorial: double(g.f) = double(g).double(f)."""
    return kron(f, f.conj())


@dataclass
class GlobalPhaseWitness:
    equal: bool
    s: object
    t: object


def global_phase_equal(f: Matrix, g: Matrix) -> GlobalPhaseWitness:
    """Whether f and g agree up to a global phase, i.e. their doubles are
    equal.  When they do, the returned scalar witnesses s = name(f)+ name(f)
    and t = name(g)+ name(f) satisfy s.f = t.g and s s+ = t t+."""
    if f.shape != g.shape:
        raise ValueError(f"shape mismatch: {f.shape} versus {g.shape}")
    sr = f.sr
    equal = wproj_double(f) == wproj_double(g)
    s = sr.zero()
    t = sr.zero()
    for i in range(f.rows):
        for j in range(f.cols):
            s = sr.add(s, sr.mul(sr.dagger(f.entry(i, j)), f.entry(i, j)))
            t = sr.add(t, sr.mul(sr.dagger(g.entry(i, j)), f.entry(i, j)))
    if equal:
        if f.scale(s).first_difference(g.scale(t)) is not None:
            raise AssertionError("phase witnesses fail s.f = t.g")
        if not sr.eq(sr.mul(s, sr.dagger(s)), sr.mul(t, sr.dagger(t))):
            raise AssertionError("phase witnesses fail s s+ = t t+")
    return GlobalPhaseWitness(equal, s, t)


# ---------------------------------------------------------------------------
# the superoperator construction
# ---------------------------------------------------------------------------


def cpm_superoperator(f: Matrix, dim_b: int, dim_c: int) -> Matrix:
    """(1_B x eps_C x 1_B*) . (1_{BC} x sigma_{B*C*}) . (f x conj f)
    for f : A -> B x C, as a matrix from A x A* to B x B*.

    With dim_c = 1 and f a state this is the vectorised density matrix."""
    if f.rows != dim_b * dim_c:
        raise ValueError(
            f"{f.shape} does not factor as ({dim_b} x {dim_c}) rows")
    sr = f.sr
    doubled = kron(f, f.conj())
    # sigma on the conjugate legs: B* x C* -> C* x B*
    n = dim_b * dim_c
    swap = Matrix.zeros(sr, n, n)
    one = sr.one()
    for b in range(dim_b):
        for c in range(dim_c):
            swap.data[(c * dim_b + b) * n + (b * dim_c + c)] = one
    step = kron(Matrix.identity(sr, n), swap) @ doubled
    # contract the two C legs: B x C x C* x B*  ->  B x B*
    rows = dim_b * dim_b
    out = Matrix.zeros(sr, rows, step.cols)
    for b1 in range(dim_b):
        for b2 in range(dim_b):
            orow = (b1 * dim_b + b2)
            for c in range(dim_c):
                srow = ((b1 * dim_c + c) * dim_c + c) * dim_b + b2
                for j in range(step.cols):
                    x = step.data[srow * step.cols + j]
                    if not sr.is_zero(x):
                        out.data[orow * step.cols + j] = sr.add(
                            out.data[orow * step.cols + j], x)
    return out


# ---------------------------------------------------------------------------
# basis structures
# ---------------------------------------------------------------------------


@dataclass
class BasisStructure:
    """Copying and deleting of the chosen basis of an n-dimensional object:
    Copy |i> = |ii> and Delete |i> = 1.  A commutative comonoid satisfying
    the Frobenius identity."""

    n: int
    copy: Matrix
    delete: Matrix

    @property
    def sr(self) -> Semiring:
        return self.copy.sr


def basis_structure(n: int, sr: Semiring = EXACT) -> BasisStructure:
    if n < 1:
        raise ValueError("basis structures need dimension at least 1")
    copy = Matrix.zeros(sr, n * n, n)
    delete = Matrix.zeros(sr, 1, n)
    one = sr.one()
    for i in range(n):
        copy.data[(i * n + i) * n + i] = one
        delete.data[i] = one
    return BasisStructure(n, copy, delete)


def comonoid_laws_hold(b: BasisStructure) -> bool:
    """Coassociativity, cocommutativity and both counit laws, exactly."""
    sr, n = b.sr, b.n
    eye = Matrix.identity(sr, n)
    coassoc_l = kron(b.copy, eye) @ b.copy
    coassoc_r = kron(eye, b.copy) @ b.copy
    if coassoc_l != coassoc_r:
        return False
    swap = Matrix.zeros(sr, n * n, n * n)
    one = sr.one()
    for i in range(n):
        for j in range(n):
            swap.data[(j * n + i) * n * n + (i * n + j)] = one
    if swap @ b.copy != b.copy:
        return False
    left_counit = kron(b.delete, eye) @ b.copy
    right_counit = kron(eye, b.delete) @ b.copy
    return left_counit == eye and right_counit == eye


def frobenius_identity_holds(b: BasisStructure) -> bool:
    """(1 x Copy+)(Copy x 1) = Copy Copy+ = (Copy+ x 1)(1 x Copy)."""
    sr, n = b.sr, b.n
    eye = Matrix.identity(sr, n)
    middle = b.copy @ b.copy.dagger()
    left = kron(eye, b.copy.dagger()) @ kron(b.copy, eye)
    right = kron(b.copy.dagger(), eye) @ kron(eye, b.copy)
    return left == middle and right == middle


def measurement_coalgebra_check(b: BasisStructure) -> bool:
    """Measuring twice equals measuring once and copying the outcome:
    (1 x Measure) . Measure = (Copy x 1) . Measure, with Measure = Copy,
    together with counit compatibility (Delete x 1) . Measure = 1."""
    sr, n = b.sr, b.n
    eye = Matrix.identity(sr, n)
    measure = b.copy
    lhs = kron(eye, measure) @ measure
    rhs = kron(b.copy, eye) @ measure
    if lhs != rhs:
        return False
    return kron(b.delete, eye) @ measure == eye


def decoherence(b: BasisStructure) -> Matrix:
    """Copy . Copy+ on the doubled space: keeps positions (i,i) of a
    vectorised density matrix and annihilates all others; idempotent."""
    return b.copy @ b.copy.dagger()


# ---------------------------------------------------------------------------
# spectral decompositions
# ---------------------------------------------------------------------------


@dataclass
class SpectralDecomposition:
    """A unitary u : A -> A_1 + ... + A_n with the summand dimensions."""

    u: Matrix
    parts: Sequence[int]

    def __post_init__(self):
        if not _is_unitary(self.u):
            raise ValueError("spectral decompositions are unitary")
        if sum(self.parts) != self.u.rows:
            raise ValueError("part dimensions do not sum to the dimension")


def spectral_projectors(d: SpectralDecomposition) -> List[Matrix]:
    """P_j = u+ . q_j . p_j . u: idempotent, self-adjoint, mutually
    orthogonal, and summing to the identity."""
    sr = d.u.sr
    n = d.u.rows
    out = []
    off = 0
    one = sr.one()
    for dim in d.parts:
        sel = Matrix.zeros(sr, n, n)
        for i in range(off, off + dim):
            sel.data[i * n + i] = one
        out.append(d.u.dagger() @ sel @ d.u)
        off += dim
    return out


def projector_laws_hold(projs: Sequence[Matrix]) -> bool:
    if not projs:
        return False
    sr = projs[0].sr
    n = projs[0].rows
    eye = Matrix.identity(sr, n)
    zero = Matrix.zeros(sr, n, n)
    total = zero
    for i, p in enumerate(projs):
        if p @ p != p or p.dagger() != p:
            return False
        for j, q in enumerate(projs):
            if i != j and p @ q != zero:
                return False
        total = total + p
    return total == eye


# ---------------------------------------------------------------------------
# bipartite entanglement projectors
# ---------------------------------------------------------------------------


def bipartite_projector(f: Matrix) -> Matrix:
    """P_f = name(f) . coname(conj f) as a matrix on the doubled legs."""
    rows, cols = f.rows, f.cols
    n = rows * cols
    name_col = Matrix.zeros(f.sr, n, 1)
    for kk in range(cols):
        for j in range(rows):
            name_col.data[kk * rows + j] = f.entry(j, kk)
    conj = f.conj()
    coname_row = Matrix.zeros(f.sr, 1, n)
    for kk in range(cols):
        for j in range(rows):
            coname_row.data[kk * rows + j] = conj.entry(j, kk)
    return name_col @ coname_row


def bipartite_normalizer(f: Matrix):
    """s_f = (coname(conj f) . name(f))^-1, when the inverse exists."""
    sr = f.sr
    acc = sr.zero()
    for x, y in zip(f.data, f.conj().data):
        acc = sr.add(acc, sr.mul(y, x))
    return sr.invert(acc)


# ---------------------------------------------------------------------------
# copying fails off the basis
# ---------------------------------------------------------------------------


def no_cloning_witness() -> VerificationReport:
    """Copying succeeds on the two basis states and provably fails on the
    balanced superposition; deleting fails there too."""
    started = time.perf_counter()
    sr = EXACT
    b = basis_structure(2, sr)
    s = HALF_SQRT2
    zero_ket = Matrix.column(sr, [QiSqrt2(1), QiSqrt2(0)])
    one_ket = Matrix.column(sr, [QiSqrt2(0), QiSqrt2(1)])
    plus = Matrix.column(sr, [s, s])
    failures = []
    if b.copy @ zero_ket != kron(zero_ket, zero_ket):
        failures.append("copy fails on |0>")
    if b.copy @ one_ket != kron(one_ket, one_ket):
        failures.append("copy fails on |1>")
    if b.copy @ plus == kron(plus, plus):
        failures.append("copy unexpectedly duplicates the superposition")
    if sr.eq((b.delete @ plus).entry(0, 0), sr.one()):
        failures.append("delete unexpectedly erases the superposition")
    ms = (time.perf_counter() - started) * 1000.0
    return VerificationReport(
        "no-cloning-witness", "fdhilb-exact", b.copy.shape, b.copy.shape,
        not failures, "; ".join(failures) if failures else None, round(ms, 3))
