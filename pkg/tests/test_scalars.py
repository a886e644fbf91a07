import random

import pytest

from catqm.scalars import (BOOL, EXACT, HALF_SQRT2, I_UNIT, ONE, SQRT2, ZERO,
                           QiSqrt2, ScalarError, format_scalar, parse_scalar,
                           scalar_combine, scalar_invert, scalar_involution)
from fractions import Fraction


def test_normalisation_scalar_squares_to_half():
    s = HALF_SQRT2
    assert s * s == QiSqrt2(Fraction(1, 2))
    # 2 s+ s = 1: the defining equation of the protocol scalar
    assert QiSqrt2(2) * s.conj() * s == ONE


def test_combine_examples():
    assert scalar_combine("mul", HALF_SQRT2, HALF_SQRT2) == QiSqrt2(Fraction(1, 2))
    assert scalar_combine("add", 1, 1) == 1
    assert scalar_combine("mul", QiSqrt2(1, 0, 1, 0), QiSqrt2(1, 0, -1, 0)) == QiSqrt2(2)


def test_combine_rejects_mixed_semirings():
    with pytest.raises(ScalarError):
        scalar_combine("add", ONE, 1)


def test_involution_examples():
    assert scalar_involution(I_UNIT) == -I_UNIT
    assert scalar_involution(HALF_SQRT2) == HALF_SQRT2
    assert scalar_involution(QiSqrt2(1, 0, 0, 1)) == QiSqrt2(1, 0, 0, -1)
    assert scalar_involution(1) == 1
    assert scalar_involution(0) == 0


def test_invert_examples():
    assert scalar_invert(QiSqrt2(2)) == QiSqrt2(Fraction(1, 2))
    assert scalar_invert(SQRT2) == HALF_SQRT2
    assert scalar_invert(1) == 1
    with pytest.raises(ScalarError):
        scalar_invert(0)
    with pytest.raises(ScalarError):
        scalar_invert(ZERO)


def _random_element(rng, span=6):
    return QiSqrt2(
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
        Fraction(rng.randint(-span, span), rng.randint(1, span)))


def test_field_axioms_on_random_elements():
    rng = random.Random(7)
    for _ in range(10_000):
        x = _random_element(rng)
        y = _random_element(rng)
        z = _random_element(rng)
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x
        if not x.is_zero:
            assert x * x.inv() == ONE


def test_involution_is_a_homomorphism():
    rng = random.Random(8)
    for _ in range(2_000):
        x = _random_element(rng)
        y = _random_element(rng)
        assert (x * y).conj() == x.conj() * y.conj()
        assert (x + y).conj() == x.conj() + y.conj()
        assert x.conj().conj() == x


def test_star_norm_is_real_and_nonnegative():
    rng = random.Random(9)
    for _ in range(2_000):
        x = _random_element(rng)
        n = x * x.conj()
        assert n.is_real
        assert n.real_sign() >= 0
        if not x.is_zero:
            assert n.real_sign() == 1


def test_literal_round_trip():
    rng = random.Random(10)
    for _ in range(500):
        x = _random_element(rng)
        assert parse_scalar(format_scalar(x)) == x
    assert format_scalar(ZERO) == "0"
    assert parse_scalar("1/2*r2") == HALF_SQRT2
    assert parse_scalar(" 1 + 2*i ") == QiSqrt2(1, 0, 2, 0)
    assert parse_scalar("-i") == -I_UNIT
    assert parse_scalar("r2*i") == QiSqrt2(0, 0, 0, 1)


def test_bad_literals():
    for bad in ("", "+", "1//2", "2*q", "1 + "):
        with pytest.raises(ScalarError):
            parse_scalar(bad)


def test_boolean_semiring_laws():
    for x in (0, 1):
        for y in (0, 1):
            assert BOOL.add(x, y) == (x or y)
            assert BOOL.mul(x, y) == (x and y)
    assert BOOL.add(1, 1) == 1


def test_exact_json_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        x = _random_element(rng)
        assert EXACT.from_json(EXACT.to_json(x)) == x
