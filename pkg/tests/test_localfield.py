from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgraph.cyclotomic import CyclotomicSum
from qgraph.localfield import (
    CharacterPhase,
    PadicNumber,
    PrecisionError,
    digit_truncation,
    is_square,
    norm,
    padic_from_rational,
    padic_sqrt,
    parse_rational,
    residue_digits_to_int,
    tate_character,
)

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def rationals(draw, nonzero=False):
    num = draw(st.integers(-500, 500).filter(lambda n: n != 0 or not nonzero))
    den = draw(st.integers(1, 500))
    return Fraction(num, den)


def test_from_rational_examples():
    one = padic_from_rational(1, 1, 3)
    assert one.v == 0 and one.digits[:3] == (1, 0, 0)
    third = padic_from_rational(1, 3, 3)
    assert third.v == -1 and third.digits[:3] == (1, 0, 0)
    x = padic_from_rational(2, 5, 3, N=10)
    assert x.v == 0 and x.digits[0] == 1
    assert x.unit * 5 % 3**10 == 2


def test_from_rational_errors():
    with pytest.raises(ZeroDivisionError):
        padic_from_rational(1, 0, 3)
    with pytest.raises(ValueError):
        padic_from_rational(1, 2, 4)


def test_norm_examples():
    assert norm(PadicNumber.zero(3)) == 0
    assert norm(padic_from_rational(1, 3, 3)) == 3
    assert norm(padic_from_rational(18, 1, 3)) == pytest.approx(1 / 9)
    assert norm(-2.5) == 2.5
    with pytest.raises(ValueError):
        norm(float("nan"))


def test_tate_character_examples():
    assert tate_character(padic_from_rational(7, 4, 3)).fraction == 0
    half = tate_character(padic_from_rational(1, 2, 2))
    assert half.fraction == Fraction(1, 2)
    assert half.value() == pytest.approx(-1)
    assert tate_character(padic_from_rational(2, 5, 5)).fraction == Fraction(2, 5)


def test_digit_truncation_examples():
    assert digit_truncation(padic_from_rational(6, 1, 3), 3) == (0, 0, 0, 0)
    assert digit_truncation(padic_from_rational(1, 9, 3), 2) == (1, 0, 0)
    assert digit_truncation(padic_from_rational(4, 1, 3), 1) == (0, 1)
    with pytest.raises(ValueError):
        digit_truncation(padic_from_rational(4, 1, 3), -1)


def test_precision_loss_is_reported():
    a = PadicNumber.from_rational(1, 3, prec=4)
    b = PadicNumber.from_rational(1 + 3**4, 3, prec=4)
    diff = a - b
    assert diff.is_zero() and not diff.is_exact_zero
    with pytest.raises(PrecisionError):
        diff.inverse()
    with pytest.raises(PrecisionError):
        diff.norm()


def test_parse_rational():
    assert parse_rational(" -3/4 ") == Fraction(-3, 4)
    assert parse_rational("0.5") == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_json_round_trip():
    x = padic_from_rational(-7, 45, 3, N=12)
    assert PadicNumber.from_json(x.to_json()) == x
    assert x.serialize(3).startswith("3^-2 * (")


def test_sqrt_examples():
    r = padic_sqrt(PadicNumber.from_rational(-1, 5, 20))
    assert r * r == PadicNumber.from_rational(-1, 5, 20)
    assert not is_square(PadicNumber.from_rational(-1, 3))
    r2 = padic_sqrt(PadicNumber.from_rational(17, 2, 20))
    assert r2 * r2 == PadicNumber.from_rational(17, 2, 20)
    with pytest.raises(ValueError):
        padic_sqrt(PadicNumber.from_rational(3, 2))


@given(PRIMES, rationals(nonzero=True), rationals(nonzero=True))
def test_norm_multiplicative_and_ultrametric(p, a, b):
    x, y = PadicNumber.from_rational(a, p), PadicNumber.from_rational(b, p)
    assert norm(x * y) == pytest.approx(norm(x) * norm(y))
    if a + b != 0:
        s = norm(x + y)
        assert s <= max(norm(x), norm(y)) * (1 + 1e-12)
        if norm(x) != norm(y):
            assert s == pytest.approx(max(norm(x), norm(y)))


@given(PRIMES, rationals(), rationals())
def test_tate_character_is_additive(p, a, b):
    x, y = PadicNumber.from_rational(a, p), PadicNumber.from_rational(b, p)
    lhs = tate_character(x + y)
    rhs = tate_character(x) + tate_character(y)
    assert lhs.fraction == rhs.fraction
    assert 0 <= lhs.fraction < 1


@given(PRIMES, rationals(nonzero=True), st.integers(1, 30))
def test_round_trip_mod_p_N(p, q, N):
    x = padic_from_rational(q.numerator, q.denominator, p, N)
    unit = residue_digits_to_int(x.digits, p)
    back = Fraction(p) ** x.v * unit
    # a/b and the digit series agree modulo p^(v + N)
    diff = q - back
    if diff != 0:
        assert PadicNumber.from_rational(diff, p).v >= x.v + N


@settings(max_examples=300)
@given(st.sampled_from([3, 5]), rationals(), rationals(), st.integers(0, 3))
def test_equal_digit_windows_split_the_difference(p, a, b, m):
    x, y = PadicNumber.from_rational(a, p), PadicNumber.from_rational(b, p)
    if a != b and digit_truncation(x, m) == digit_truncation(y, m):
        # the difference is a high part (exponents < -m) plus a low part (exponents > 0)
        d = norm(x - y)
        assert d < 1 or d > p**m


def test_character_phase_arithmetic():
    a = CharacterPhase(3, 1, 2)
    b = CharacterPhase(3, 8, 2)
    assert (a + b).fraction == 0
    assert (-a).fraction == Fraction(8, 9)
    with pytest.raises(ValueError):
        a + CharacterPhase(5, 1, 1)


def test_cyclotomic_sum_of_all_roots_is_zero():
    p, L = 5, 2
    counts = np.ones(p**L, dtype=np.int64)
    assert CyclotomicSum.from_counts(p, L, counts).is_zero()


def test_cyclotomic_conjugate_and_rational():
    p = 7
    counts = np.zeros(p, dtype=np.int64)
    counts[1] = counts[p - 1] = 1
    s = CyclotomicSum.from_counts(p, 1, counts)
    assert s.is_real() and s.as_rational() is None
    assert float(s) == pytest.approx(2 * np.cos(2 * np.pi / 7))
    assert (s + Fraction(1, 2)).lift(3) == s + Fraction(1, 2)
    assert CyclotomicSum.rational(p, Fraction(-2, 3)).as_rational() == Fraction(-2, 3)
