"""Dense matrices over an involutive semiring, and the evaluation of
typechecked morphism terms into them.

Index flattening is row-major lexicographic throughout: the basis vector
``e_i x e_j`` of ``A x B`` sits at index ``i * dim(B) + j``, and the
summand ``A_k`` of a biproduct occupies a contiguous block of indices.
Every structural isomorphism therefore evaluates to an explicit
permutation (or identity) matrix computed from this convention.  A dual
object carries the same basis and dimension as the object itself; only
scalar entries are conjugated.
"""

from __future__ import annotations

from typing import Mapping

from . import kernel as k
from .scalars import SEMIRINGS, ScalarError, Semiring


class ModelError(ValueError):
    """Model-level failure: unknown model/generator, shape clash."""


class Matrix:
    """Row-major dense matrix over a fixed semiring."""

    __slots__ = ("sr", "rows", "cols", "data")

    def __init__(self, sr: Semiring, rows: int, cols: int, data):
        data = list(data)
        if len(data) != rows * cols:
            raise ModelError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
        self.sr = sr
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, sr, rows, cols):
        z = sr.zero()
        return cls(sr, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, sr, n):
        m = cls.zeros(sr, n, n)
        one = sr.one()
        for i in range(n):
            m.data[i * n + i] = one
        return m

    @classmethod
    def from_rows(cls, sr, rows_):
        rows_ = [list(r) for r in rows_]
        nrows = len(rows_)
        ncols = len(rows_[0]) if rows_ else 0
        flat = []
        for r in rows_:
            if len(r) != ncols:
                raise ModelError("ragged rows")
            flat.extend(r)
        return cls(sr, nrows, ncols, flat)

    @classmethod
    def permutation(cls, sr, mapping):
        """Matrix of j |-> mapping[j] (entry one at (mapping[j], j))."""
        n = len(mapping)
        m = cls.zeros(sr, n, n)
        one = sr.one()
        for j, i in enumerate(mapping):
            m.data[i * n + j] = one
        return m

    @classmethod
    def column(cls, sr, entries):
        entries = list(entries)
        return cls(sr, len(entries), 1, entries)

    @classmethod
    def row_vector(cls, sr, entries):
        entries = list(entries)
        return cls(sr, 1, len(entries), entries)

    # -- access ----------------------------------------------------------

    def entry(self, i, j):
        return self.data[i * self.cols + j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i):
        return self.data[i * self.cols:(i + 1) * self.cols]

    # -- arithmetic --------------------------------------------------------

    def _need_same_sr(self, other):
        if self.sr is not other.sr:
            raise ScalarError(
                f"mixed semirings: {self.sr.name} and {other.sr.name}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._need_same_sr(other)
        if self.cols != other.rows:
            raise ModelError(
                f"cannot multiply {self.shape} by {other.shape}")
        sr = self.sr
        is_zero, add, mul = sr.is_zero, sr.add, sr.mul
        bc = other.cols
        out = [sr.zero()] * (self.rows * bc)
        bd = other.data
        # nonzero entries of the right factor, indexed lazily per row:
        # products here are dominated by permutation-like blocks
        b_rows = [None] * other.rows
        ad = self.data
        for i in range(self.rows):
            arow = i * self.cols
            orow = i * bc
            for p in range(self.cols):
                aip = ad[arow + p]
                if is_zero(aip):
                    continue
                row = b_rows[p]
                if row is None:
                    off = p * bc
                    row = [(j, bd[off + j]) for j in range(bc)
                           if not is_zero(bd[off + j])]
                    b_rows[p] = row
                for j, bpj in row:
                    out[orow + j] = add(out[orow + j], mul(aip, bpj))
        return Matrix(sr, self.rows, other.cols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._need_same_sr(other)
        if self.shape != other.shape:
            raise ModelError(f"cannot add {self.shape} and {other.shape}")
        sr = self.sr
        return Matrix(sr, self.rows, self.cols,
                      [sr.add(x, y) for x, y in zip(self.data, other.data)])

    def scale(self, s) -> "Matrix":
        sr = self.sr
        return Matrix(sr, self.rows, self.cols, [sr.mul(s, x) for x in self.data])

    def transpose(self) -> "Matrix":
        out = [None] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.data[i * self.cols + j]
        return Matrix(self.sr, self.cols, self.rows, out)

    def conj(self) -> "Matrix":
        sr = self.sr
        return Matrix(sr, self.rows, self.cols, [sr.dagger(x) for x in self.data])

    def dagger(self) -> "Matrix":
        return self.conj().transpose()

    def kron(self, other: "Matrix") -> "Matrix":
        self._need_same_sr(other)
        sr = self.sr
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        out = [sr.zero()] * (rows * cols)
        for i1 in range(self.rows):
            for j1 in range(self.cols):
                x = self.data[i1 * self.cols + j1]
                if sr.is_zero(x):
                    continue
                base = (i1 * other.rows) * cols + j1 * other.cols
                for i2 in range(other.rows):
                    roff = base + i2 * cols
                    boff = i2 * other.cols
                    for j2 in range(other.cols):
                        y = other.data[boff + j2]
                        if not sr.is_zero(y):
                            out[roff + j2] = sr.mul(x, y)
        return Matrix(sr, rows, cols, out)

    def dsum(self, other: "Matrix") -> "Matrix":
        self._need_same_sr(other)
        sr = self.sr
        rows = self.rows + other.rows
        cols = self.cols + other.cols
        out = Matrix.zeros(sr, rows, cols)
        for i in range(self.rows):
            out.data[i * cols:i * cols + self.cols] = self.row(i)
        for i in range(other.rows):
            off = (self.rows + i) * cols + self.cols
            out.data[off:off + other.cols] = other.row(i)
        return out

    def trace(self):
        if self.rows != self.cols:
            raise ModelError(f"trace of a non-square {self.shape} matrix")
        sr = self.sr
        t = sr.zero()
        for i in range(self.rows):
            t = sr.add(t, self.data[i * self.cols + i])
        return t

    # -- comparison and export --------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.sr is not other.sr or self.shape != other.shape:
            return False
        eq = self.sr.eq
        return all(eq(x, y) for x, y in zip(self.data, other.data))

    __hash__ = None  # mutable payload; matrices are compared, never hashed

    def first_difference(self, other: "Matrix"):
        """(i, j, self[i,j], other[i,j]) of the first unequal entry, or None."""
        if self.shape != other.shape:
            return (-1, -1, self.shape, other.shape)
        eq = self.sr.eq
        for i in range(self.rows):
            for j in range(self.cols):
                x = self.entry(i, j)
                y = other.entry(i, j)
                if not eq(x, y):
                    return (i, j, x, y)
        return None

    def to_json(self):
        sr = self.sr
        return {
            "rows": self.rows,
            "cols": self.cols,
            "semiring": sr.name,
            "entries": [[sr.to_json(x) for x in self.row(i)] for i in range(self.rows)],
        }

    @classmethod
    def from_json(cls, obj):
        sr = SEMIRINGS.get(obj["semiring"])
        if sr is None:
            raise ModelError(f"unknown semiring {obj['semiring']!r}")
        rows, cols = obj["rows"], obj["cols"]
        entries = obj["entries"]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ModelError("entry grid does not match declared shape")
        flat = [sr.from_json(v) for r in entries for v in r]
        return cls(sr, rows, cols, flat)

    def __repr__(self):
        body = "; ".join(
            " ".join(self.sr.fmt(x) for x in self.row(i)) for i in range(self.rows))
        return f"<{self.rows}x{self.cols} {self.sr.name} [{body}]>"


# -- module-level operation names ------------------------------------------


def kron(a: Matrix, b: Matrix) -> Matrix:
    return a.kron(b)


def dsum(a: Matrix, b: Matrix) -> Matrix:
    return a.dsum(b)


def adjoint(a: Matrix) -> Matrix:
    return a.dagger()


def conjugate(a: Matrix) -> Matrix:
    return a.conj()


def transpose(a: Matrix) -> Matrix:
    return a.transpose()


def trace_full(a: Matrix):
    return a.trace()


def partial_trace(a: Matrix, dim_a: int, dim_b: int, dim_c: int) -> Matrix:
    """Trace out the trailing factor of f : A x C -> B x C."""
    if a.rows != dim_b * dim_c or a.cols != dim_a * dim_c:
        raise ModelError(
            f"partial trace of {a.shape} does not match dims ({dim_a},{dim_b},{dim_c})")
    sr = a.sr
    out = Matrix.zeros(sr, dim_b, dim_a)
    for b in range(dim_b):
        for a_ in range(dim_a):
            acc = sr.zero()
            for c in range(dim_c):
                acc = sr.add(acc, a.entry(b * dim_c + c, a_ * dim_c + c))
            out.data[b * dim_a + a_] = acc
    return out


def inner_product(psi: Matrix, phi: Matrix):
    """<psi|phi> = (psi dagger . phi) as a scalar; column vectors only."""
    if psi.cols != 1 or phi.cols != 1 or psi.rows != phi.rows:
        raise ModelError(
            f"inner product needs equal-length columns, got {psi.shape}, {phi.shape}")
    return (psi.dagger() @ phi).entry(0, 0)


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------


class Model:
    """A semiring choice plus generator dimensions and matrices.

    Generator matrices are declared once with exact entries (in the
    signature) and converted into the model's semiring here; shapes are
    validated against (dim cod, dim dom).  Immutable after construction.
    """

    def __init__(self, name: str, sr: Semiring, signature: k.Signature):
        self.name = name
        self.sr = sr
        self.signature = signature
        self._gens = {}
        for gname, gen in signature.morphisms.items():
            rows = self.dim(gen.cod)
            cols = self.dim(gen.dom)
            self._gens[gname] = Matrix(sr, rows, cols,
                                       [sr.from_exact(q) for q in gen.entries])

    @property
    def dims(self) -> Mapping[str, int]:
        return self.signature.objects

    def dim(self, obj) -> int:
        return k.object_dim(self.signature.objects, k.strictify(obj, self.signature))

    def gen_matrix(self, name: str) -> Matrix:
        try:
            return self._gens[name]
        except KeyError:
            raise ModelError(f"model {self.name!r} has no generator {name!r}") from None

    def extend(self, objects=None, morphisms=None) -> "Model":
        return Model(self.name, self.sr, self.signature.extended(objects, morphisms))

    def __repr__(self):
        return f"<model {self.name} over {self.sr.name}>"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _perm_sigma(d_left, d_right):
    return [(j % d_right) * d_left + (j // d_right)
            for j in range(d_left * d_right)]


def _perm_dist_r(da, db, dc):
    out = []
    for j in range(da * (db + dc)):
        a, x = divmod(j, db + dc)
        if x < db:
            out.append(a * db + x)
        else:
            out.append(da * db + a * dc + (x - db))
    return out


def _perm_dist_l(da, db, dc):
    # identity under row-major flattening, computed explicitly all the same
    out = []
    for j in range((da + db) * dc):
        x, c = divmod(j, dc)
        if x < da:
            out.append(x * dc + c)
        else:
            out.append(da * dc + (x - da) * dc + c)
    return out


def _invert_perm(p):
    out = [0] * len(p)
    for j, i in enumerate(p):
        out[i] = j
    return out


# nodes whose denotation is an identity matrix (given strict typing);
# composition skips them instead of materialising large identities
_IDENTITY_NODES = (k.Id, k.Lambda, k.LambdaInv, k.Rho, k.RhoInv, k.Alpha,
                   k.AlphaInv, k.UnitDual, k.UnitDualInv, k.BiprodDual,
                   k.BiprodDualInv, k.DoubleDual, k.DoubleDualInv)


def evaluate(t: k.MorphismTerm, model: Model) -> Matrix:
    """Denotation of a typechecked term in a model.

    The result shape is (dim cod, dim dom) of the term's judgment.
    """
    sr = model.sr
    sig = model.signature

    if isinstance(t, k.Id):
        return Matrix.identity(sr, model.dim(t.obj))
    if isinstance(t, k.GenMor):
        return model.gen_matrix(t.name)
    if isinstance(t, k.Compose):
        if isinstance(t.before, _IDENTITY_NODES):
            return evaluate(t.after, model)
        if isinstance(t.after, _IDENTITY_NODES):
            return evaluate(t.before, model)
        return evaluate(t.after, model) @ evaluate(t.before, model)
    if isinstance(t, k.TensorM):
        return evaluate(t.left, model).kron(evaluate(t.right, model))
    if isinstance(t, k.Dagger):
        return evaluate(t.arg, model).dagger()
    if isinstance(t, k.DualM):
        return evaluate(t.arg, model).transpose()
    if isinstance(t, k.ConjM):
        return evaluate(t.arg, model).conj()
    if isinstance(t, k.Eta):
        n = model.dim(t.obj)
        col = Matrix.zeros(sr, n * n, 1)
        one = sr.one()
        for i in range(n):
            col.data[i * n + i] = one
        return col
    if isinstance(t, k.Epsilon):
        n = model.dim(t.obj)
        row = Matrix.zeros(sr, 1, n * n)
        one = sr.one()
        for i in range(n):
            row.data[i * n + i] = one
        return row
    if isinstance(t, k.Sigma):
        dl = model.dim(t.left)
        dr = model.dim(t.right)
        return Matrix.permutation(sr, _perm_sigma(dl, dr))
    if isinstance(t, (k.Lambda, k.LambdaInv, k.Rho, k.RhoInv)):
        return Matrix.identity(sr, model.dim(t.obj))
    if isinstance(t, (k.Alpha, k.AlphaInv)):
        return Matrix.identity(
            sr, model.dim(t.a) * model.dim(t.b) * model.dim(t.c))
    if isinstance(t, (k.UnitDual, k.UnitDualInv)):
        return Matrix.identity(sr, 1)
    if isinstance(t, (k.BiprodDual, k.BiprodDualInv)):
        return Matrix.identity(sr, model.dim(t.a) + model.dim(t.b))
    if isinstance(t, (k.DoubleDual, k.DoubleDualInv)):
        return Matrix.identity(sr, model.dim(t.obj))
    if isinstance(t, k.Inj):
        dims = [model.dim(p) for p in t.parts]
        total = sum(dims)
        d = dims[t.index - 1]
        off = sum(dims[:t.index - 1])
        m = Matrix.zeros(sr, total, d)
        one = sr.one()
        for j in range(d):
            m.data[(off + j) * d + j] = one
        return m
    if isinstance(t, k.Proj):
        dims = [model.dim(p) for p in t.parts]
        total = sum(dims)
        d = dims[t.index - 1]
        off = sum(dims[:t.index - 1])
        m = Matrix.zeros(sr, d, total)
        one = sr.one()
        for i in range(d):
            m.data[i * total + off + i] = one
        return m
    if isinstance(t, k.Pair):
        mats = [evaluate(p, model) for p in t.parts]
        cols = mats[0].cols
        rows = sum(m.rows for m in mats)
        data = []
        for m in mats:
            data.extend(m.data)
        return Matrix(sr, rows, cols, data)
    if isinstance(t, k.Copair):
        mats = [evaluate(p, model) for p in t.parts]
        rows = mats[0].rows
        cols = sum(m.cols for m in mats)
        data = []
        for i in range(rows):
            for m in mats:
                data.extend(m.row(i))
        return Matrix(sr, rows, cols, data)
    if isinstance(t, k.ZeroM):
        return Matrix.zeros(sr, model.dim(t.cod), model.dim(t.dom))
    if isinstance(t, k.Plus):
        return evaluate(t.left, model) + evaluate(t.right, model)
    if isinstance(t, k.ScalarMul):
        return evaluate(t.arg, model).scale(sr.from_exact(t.scalar))
    if isinstance(t, k.Name):
        f = evaluate(t.arg, model)
        col = Matrix.zeros(sr, f.rows * f.cols, 1)
        for kk in range(f.cols):
            for j in range(f.rows):
                col.data[kk * f.rows + j] = f.entry(j, kk)
        return col
    if isinstance(t, k.Coname):
        f = evaluate(t.arg, model)
        row = Matrix.zeros(sr, 1, f.cols * f.rows)
        for i in range(f.cols):
            for j in range(f.rows):
                row.data[i * f.rows + j] = f.entry(j, i)
        return row
    if isinstance(t, k.DistR):
        return Matrix.permutation(
            sr, _perm_dist_r(model.dim(t.a), model.dim(t.b), model.dim(t.c)))
    if isinstance(t, k.DistRInv):
        return Matrix.permutation(
            sr, _invert_perm(_perm_dist_r(model.dim(t.a), model.dim(t.b), model.dim(t.c))))
    if isinstance(t, k.DistL):
        return Matrix.permutation(
            sr, _perm_dist_l(model.dim(t.a), model.dim(t.b), model.dim(t.c)))
    if isinstance(t, k.DistLInv):
        return Matrix.permutation(
            sr, _invert_perm(_perm_dist_l(model.dim(t.a), model.dim(t.b), model.dim(t.c))))
    raise k.TermTypeError(f"not a morphism term: {t!r}")


def scalar_dimension(model: Model, a: k.ObjectExpr):
    """Trace of the identity: the scalar notion of dimension."""
    return trace_full(evaluate(k.Id(a), model))
