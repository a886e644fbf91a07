"""Involutive commutative semirings used as matrix entry domains.

Three instances:

* ``QiSqrt2`` -- exact elements of the field Q(i, sqrt 2), stored as four
  rationals ``a + b*sqrt2 + c*i + d*i*sqrt2``.  This is the entry type for
  all exact verification: equality is decidable and bit-exact, and it
  contains 1/sqrt2 (the normalisation scalar of the entangled-pair
  protocols) together with the fourth roots of unity.
* Booleans 0/1 with OR as addition and AND as multiplication (the scalars
  of the relational model); the involution is the identity.
* double-precision complex numbers with a comparison tolerance, kept only
  for approximate smoke tests.

The text form of an exact scalar is ``a+b*r2+c*i+d*i*r2`` with rationals
written ``p/q`` (for instance ``1/2*r2`` is 1/sqrt2).  Zero coefficients
are omitted and unit coefficients are elided, so ``-i`` and ``1-1/2*r2``
are both valid.
"""

from __future__ import annotations

from fractions import Fraction


class ScalarError(ValueError):
    """Bad scalar literal, mixed-semiring operands, or missing inverse."""


_F0 = Fraction(0)
_F1 = Fraction(1)


class QiSqrt2:
    """a + b*sqrt2 + (c + d*sqrt2)*i with exact rational coefficients."""

    __slots__ = ("a", "b", "c", "d", "_zero")

    def __init__(self, a=0, b=0, c=0, d=0):
        a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_zero", not (a or b or c or d))

    def __setattr__(self, *_):
        raise AttributeError("QiSqrt2 values are immutable")

    # -- ring structure ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return QiSqrt2(self.a + other.a, self.b + other.b,
                       self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return QiSqrt2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        # split into real/imaginary parts over Q(sqrt2):
        # (x1 + y1 i)(x2 + y2 i) = (x1x2 - y1y2) + (x1y2 + y1x2) i
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        ra = a1 * a2 + 2 * b1 * b2 - (c1 * c2 + 2 * d1 * d2)
        rb = a1 * b2 + b1 * a2 - (c1 * d2 + d1 * c2)
        ia = a1 * c2 + 2 * b1 * d2 + c1 * a2 + 2 * d1 * b2
        ib = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return QiSqrt2(ra, rb, ia, ib)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def conj(self):
        """Complex conjugation: the involution of the semiring."""
        return QiSqrt2(self.a, self.b, -self.c, -self.d)

    def inv(self):
        """Exact multiplicative inverse; raises on zero."""
        if self.is_zero:
            raise ScalarError("0 has no multiplicative inverse")
        # 1/(x + yi) = (x - yi)/(x^2 + y^2), then invert in Q(sqrt2):
        # 1/(p + q*sqrt2) = (p - q*sqrt2)/(p^2 - 2 q^2).
        num = self.conj()
        nrm = self * num                       # real: c = d = 0
        p, q = nrm.a, nrm.b
        den = p * p - 2 * q * q                # nonzero since sqrt2 irrational
        inv_nrm = QiSqrt2(p / den, -q / den)
        return num * inv_nrm

    # -- predicates and views -------------------------------------------

    @property
    def is_zero(self):
        return self._zero

    @property
    def is_real(self):
        return not (self.c or self.d)

    def real_sign(self):
        """Exact sign of a + b*sqrt2 (requires a real value)."""
        if not self.is_real:
            raise ScalarError("real_sign of a non-real scalar")
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 against 2 b^2 exactly
        if a > 0:
            return 1 if a * a > 2 * b * b else (-1 if a * a < 2 * b * b else 0)
        return 1 if 2 * b * b > a * a else (-1 if 2 * b * b < a * a else 0)

    def to_complex(self):
        import math
        r2 = math.sqrt(2.0)
        return complex(float(self.a) + float(self.b) * r2,
                       float(self.c) + float(self.d) * r2)

    # -- equality, hashing, formatting ----------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QiSqrt2(other)
        if not isinstance(other, QiSqrt2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"QiSqrt2({format_scalar(self)!r})"


def _coerce(x):
    if isinstance(x, QiSqrt2):
        return x
    if isinstance(x, (int, Fraction)):
        return QiSqrt2(x)
    raise ScalarError(f"cannot mix {type(x).__name__} with exact scalars")


ZERO = QiSqrt2(0)
ONE = QiSqrt2(1)
I_UNIT = QiSqrt2(0, 0, 1, 0)
SQRT2 = QiSqrt2(0, 1)
HALF_SQRT2 = QiSqrt2(0, Fraction(1, 2))    # 1/sqrt2, squares to 1/2


# -- text form ----------------------------------------------------------


def format_scalar(x: QiSqrt2) -> str:
    """Canonical compact literal, e.g. ``1/2*r2`` or ``1-i``."""
    parts = []
    for coeff, sym in ((x.a, ""), (x.b, "r2"), (x.c, "i"), (x.d, "i*r2")):
        if coeff == 0:
            continue
        mag = abs(coeff)
        if sym and mag == 1:
            body = sym
        elif sym:
            body = f"{mag}*{sym}"
        else:
            body = str(mag)
        sign = "-" if coeff < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    out = (first_sign if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


def parse_scalar(text: str) -> QiSqrt2:
    """Parse the exact-scalar text form (whitespace is ignored)."""
    s = "".join(text.split())
    if not s:
        raise ScalarError("empty scalar literal")
    # split into sign-prefixed terms
    terms = []
    cur = ""
    sign = 1
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    for ch in s[i:]:
        if ch in "+-" and cur and cur[-1] not in "*/":
            terms.append((sign, cur))
            sign = -1 if ch == "-" else 1
            cur = ""
        else:
            cur += ch
    if not cur:
        raise ScalarError(f"dangling sign in scalar literal {text!r}")
    terms.append((sign, cur))

    total = ZERO
    for sgn, term in terms:
        coeff = _F1
        has_r2 = has_i = False
        for factor in term.split("*"):
            if factor == "r2":
                if has_r2:
                    coeff *= 2
                else:
                    has_r2 = True
            elif factor == "i":
                if has_i:
                    coeff *= -1
                    has_i = False
                else:
                    has_i = True
            else:
                try:
                    coeff *= Fraction(factor)
                except (ValueError, ZeroDivisionError):
                    raise ScalarError(
                        f"bad factor {factor!r} in scalar literal {text!r}") from None
        coeff *= sgn
        if has_r2 and has_i:
            part = QiSqrt2(0, 0, 0, coeff)
        elif has_r2:
            part = QiSqrt2(0, coeff)
        elif has_i:
            part = QiSqrt2(0, 0, coeff)
        else:
            part = QiSqrt2(coeff)
        total = total + part
    return total


# -- semiring instances ---------------------------------------------------


class Semiring:
    """Operations of an involutive commutative semiring over plain values."""

    name = "abstract"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def dagger(self, x):
        raise NotImplementedError

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return self.eq(x, self.zero())

    def invert(self, x):
        raise NotImplementedError

    def from_exact(self, q: QiSqrt2):
        raise NotImplementedError

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, v):
        raise NotImplementedError

    def fmt(self, x) -> str:
        return str(x)

    def __repr__(self):
        return f"<semiring {self.name}>"


class ExactSemiring(Semiring):
    name = "qisqrt2"

    def zero(self):
        return ZERO

    def one(self):
        return ONE

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def dagger(self, x):
        return x.conj()

    def is_zero(self, x):
        return x._zero

    def invert(self, x):
        return x.inv()

    def from_exact(self, q):
        return q

    def to_json(self, x):
        return [str(x.a), str(x.b), str(x.c), str(x.d)]

    def from_json(self, v):
        return QiSqrt2(Fraction(v[0]), Fraction(v[1]), Fraction(v[2]), Fraction(v[3]))

    def fmt(self, x):
        return format_scalar(x)


class BoolSemiring(Semiring):
    name = "bool"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, x, y):
        return x | y

    def mul(self, x, y):
        return x & y

    def dagger(self, x):
        return x

    def is_zero(self, x):
        return x == 0

    def invert(self, x):
        if x != 1:
            raise ScalarError("Boolean 0 has no inverse")
        return 1

    def from_exact(self, q):
        return 0 if q.is_zero else 1

    def to_json(self, x):
        return x

    def from_json(self, v):
        if v not in (0, 1):
            raise ScalarError(f"bad Boolean scalar {v!r}")
        return v


class ComplexSemiring(Semiring):
    name = "complex"

    def __init__(self, eps=1e-9):
        self.eps = eps

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def dagger(self, x):
        return x.conjugate()

    def eq(self, x, y):
        return abs(x.real - y.real) <= self.eps and abs(x.imag - y.imag) <= self.eps

    def is_zero(self, x):
        return self.eq(x, 0j)

    def invert(self, x):
        if self.is_zero(x):
            raise ScalarError("0 has no multiplicative inverse")
        return 1 / x

    def from_exact(self, q):
        return q.to_complex()

    def to_json(self, x):
        return [x.real, x.imag]

    def from_json(self, v):
        return complex(v[0], v[1])


EXACT = ExactSemiring()
BOOL = BoolSemiring()
CFLOAT = ComplexSemiring()

SEMIRINGS = {sr.name: sr for sr in (EXACT, BOOL, CFLOAT)}


def _semiring_of(x) -> Semiring:
    if isinstance(x, QiSqrt2):
        return EXACT
    if isinstance(x, bool) or isinstance(x, int):
        return BOOL
    if isinstance(x, complex):
        return CFLOAT
    raise ScalarError(f"value {x!r} belongs to no known semiring")


def scalar_combine(op: str, x, y):
    """Add or multiply two scalars of the same semiring."""
    sx, sy = _semiring_of(x), _semiring_of(y)
    if sx is not sy:
        raise ScalarError(f"mixed semirings: {sx.name} and {sy.name}")
    if op == "add":
        return sx.add(x, y)
    if op == "mul":
        return sx.mul(x, y)
    raise ScalarError(f"unknown scalar operation {op!r}")


def scalar_involution(x):
    return _semiring_of(x).dagger(x)


def scalar_invert(x):
    return _semiring_of(x).invert(x)
