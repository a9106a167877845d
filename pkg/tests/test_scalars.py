from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardywco import scalars as S
from hardywco.scalars import GaussianRational as G


def test_parse_scalar_exact():
    assert S.parse_scalar("0.5") == G(F(1, 2))
    assert S.parse_scalar("1/3") == G(F(1, 3))
    assert S.parse_scalar("2i") == G(0, 2)
    assert S.parse_scalar("0.3+0.4j") == G(F(3, 10), F(2, 5))
    assert S.parse_scalar("-1/2-i") == G(F(-1, 2), -1)
    with pytest.raises(ValueError):
        S.parse_scalar("half")


def test_arithmetic_stays_exact():
    z = G(1, 2)
    w = z / G(3, -1)
    assert isinstance(w, G)
    assert w * G(3, -1) == z
    assert z.conjugate() == G(1, -2)
    assert z.abs2() == 5
    assert z ** -2 * z ** 2 == 1


def test_mixing_with_float_falls_back():
    assert isinstance(G(1) + 0.5, complex)
    assert isinstance(G(1) * 1j, complex)


def test_exact_sqrt():
    assert S.sqrt(G(F(9, 16))) == G(F(3, 4))
    assert S.sqrt(G(-3, 4)) == G(1, 2)
    assert S.sqrt(G(0, -2)) == G(1, -1)
    r = S.sqrt(G(2))
    assert isinstance(r, complex) and abs(r * r - 2) < 1e-15


def test_pairs_round_trip():
    assert S.from_pair([1, 2]) == G(1, 2)
    assert isinstance(S.from_pair([0.5, 0.0]), complex)
    assert S.to_pair(G(F(1, 2), 0)) == [0.5, 0.0]
    assert str(S.to_pair(complex(-0.0, -0.0))) == "[0.0, 0.0]"


rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100)


@given(rationals, rationals, rationals, rationals)
def test_field_identities(a, b, c, d):
    x, y = G(a, b), G(c, d)
    assert x + y - y == x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert (x * y).abs2() == x.abs2() * y.abs2()
    if y:
        assert x / y * y == x
