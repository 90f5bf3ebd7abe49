from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.errors import DivisionByZero, InvalidField, NonSquareResidue, OddValuation, SchemaError
from artifact.padic import FieldDescriptor, from_json, lift, log_iwasawa, vp_rational

F17 = FieldDescriptor(17, 2, 1, N=20, name="a")
F5 = FieldDescriptor(5, 2, 2, (-2, 0, 1), N=20)
F7 = FieldDescriptor(7, 1, 1, N=12)

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4).filter(lambda x: x != 0)
fields = st.sampled_from([F17, F5, F7])


def test_uniformizer_power_is_p():
    a = F17.uniformizer()
    assert (a * a).equals(F17(17))
    pi = F5.uniformizer()
    assert (pi * pi).equals(F5(5))


def test_unramified_generator_squares_to_two():
    u = F5.unram_generator()
    assert (u * u).equals(F5(2))


def test_digits_of_rational():
    x = F7(Fraction(1, 3), 6)
    # 1/3 = 5 + 4*7 + 4*7^2 + ... in Z_7
    assert x.digits() == [5, 4, 4, 4, 4, 4]
    assert x.to_json() == {"digits": [5, 4, 4, 4, 4, 4], "val": 0, "prec": 6, "uniformizer": "7"}


def test_ramified_digits_use_uniformiser():
    x = F17(17 * 12, 8)
    assert x.to_json() == {"digits": [12, 0, 0, 0, 0, 0], "val": 2, "prec": 8, "uniformizer": "a"}


def test_coefficient_list_input():
    a = F17.uniformizer()
    assert F17([6, 1]).equals(a + 6)
    u = F5.unram_generator()
    assert F5([[0, 1], 3]).equals(u + 3 * F5.uniformizer())


def test_bad_fields_rejected():
    with pytest.raises(InvalidField):
        FieldDescriptor(2)
    with pytest.raises(InvalidField):
        FieldDescriptor(9)
    with pytest.raises(InvalidField):
        FieldDescriptor(5, 1, 2, (-1, 0, 1))  # x^2 - 1 is reducible


def test_unparseable_string():
    with pytest.raises(SchemaError):
        F7("not a number")


def test_sqrt_errors():
    with pytest.raises(OddValuation):
        F7(7).sqrt()
    with pytest.raises(NonSquareResidue):
        F7(3).sqrt()
    with pytest.raises(NonSquareResidue):
        F7(2).sqrt(sign_hint=1)


def test_sqrt_hint_selects_branch():
    r = F7(2).sqrt(sign_hint=3)
    assert r.residue() == (3,)
    assert (r * r).equals(F7(2))


def test_log_of_p_is_zero():
    assert log_iwasawa(F7(7)).is_zero()
    assert log_iwasawa(F17.uniformizer()).is_zero()


def test_log_zero_raises():
    with pytest.raises(DivisionByZero):
        log_iwasawa(F7.zero())


@given(fields, rationals, rationals)
def test_ring_axioms(F, x, y):
    a, b = F(x), F(y)
    assert (a + b).equals(F(x + y))
    assert (a * b).equals(F(x * y))
    assert (a - b).equals(F(x - y))
    assert ((a * b) / b).equals(a)


@given(fields, rationals)
def test_valuation_matches_rational(F, x):
    assert F(x).valuation() == F.e * vp_rational(x, F.p)


@given(fields, rationals)
def test_json_roundtrip(F, x):
    a = F(x)
    assert from_json(F, a.to_json()).equals(a)


@given(fields, rationals)
def test_sqrt_of_square(F, x):
    a = F(x)
    r = (a * a).sqrt()
    assert (r * r).equals(a * a, (a * a).prec)
    assert r.equals(a) or r.equals(-a)


@given(rationals, rationals)
def test_log_is_additive_on_units(x, y):
    a, b = F7(x), F7(y)
    bound = min(a.relative_precision(), b.relative_precision()) - 2
    assert (log_iwasawa(a * b) - log_iwasawa(a) - log_iwasawa(b)).valuation() >= bound


@given(rationals)
def test_precision_never_grows_under_addition(x):
    a = F7(x, 5)
    b = F7(x, 9)
    assert (a + b).prec == 5
    assert lift(F7, a, 3).prec == 3
