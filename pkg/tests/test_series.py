from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.padic import FieldDescriptor
from artifact.series import (NonUnitConstantTerm, TruncatedSeries, antidifferentiate_annulus, binomial_series,
                             horner_laurent, inv_sqrt_binomial, ps_mul)

F = FieldDescriptor(7, 1, 1, N=15)
small = st.integers(-20, 20)


def series(coeffs, start=0):
    return TruncatedSeries.from_list(F, [F(c) for c in coeffs], start)


@given(st.lists(small, min_size=1, max_size=6))
def test_inverse_square_root(tail):
    u = series([1] + [7 * c for c in tail])
    s = inv_sqrt_binomial(u)
    n = u.hi + 1
    prod = ps_mul(ps_mul(s.to_list(0, n), s.to_list(0, n), n), u.to_list(0, n), n)
    assert prod[0].equals(F(1))
    assert all(c.is_zero() or c.valuation() >= c.prec for c in prod[1:])


def test_inverse_square_root_needs_unit_constant():
    with pytest.raises(NonUnitConstantTerm):
        inv_sqrt_binomial(series([2, 1]))


def test_antiderivative_separates_log_term():
    prim, c_log = antidifferentiate_annulus(series([3, 5, 1], start=-2))
    assert c_log.equals(F(5))
    assert prim[-1].equals(F(-3))
    assert prim[1].equals(F(1))


@given(st.integers(1, 30))
def test_binomial_series_square(n):
    c = F(7)
    half = binomial_series(F, Fraction(1, 2), c, 8)
    sq = ps_mul(half, half, 8)
    assert sq[0].equals(F(1)) and sq[1].equals(c)
    assert all(x.is_zero() or x.valuation() >= x.prec for x in sq[2:])


@given(st.lists(small, min_size=1, max_size=5), st.integers(-3, 0), st.integers(1, 40))
def test_horner_laurent(coeffs, lo, t):
    tt = F(t * 7 + 1)
    d = {lo + i: F(c) for i, c in enumerate(coeffs)}
    direct = sum((c * tt**n for n, c in d.items()), F.zero())
    assert horner_laurent(d, tt).equals(direct, 12)
