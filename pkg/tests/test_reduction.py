import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.errors import HypothesisViolated
from artifact.padic import FieldDescriptor
from artifact.reduction import (Center, MeromorphicForm, _loss_bound, cohomology_class, exact_form,
                                principal_part, residual_valuation)
from artifact import _poly
from support import random_chart, random_form

N = 20


@given(st.integers(0, 10**6), st.integers(1, 40))
def test_decomposition_is_exact(seed, n_terms):
    rng = random.Random(seed)
    F, g, centers = random_chart(rng, N)
    form = random_form(rng, F, centers, len(g) - 1, n_terms)
    dec = cohomology_class(g, centers, form)
    assert residual_valuation(form, exact_form(g, centers, dec)) >= N
    assert len(dec.c) == len(g) - 2


@given(st.integers(0, 10**6))
def test_losses_within_certified_bounds(seed):
    rng = random.Random(seed)
    F, g, centers = random_chart(rng, N)
    form = random_form(rng, F, centers, len(g) - 1, 30)
    dec = cohomology_class(g, centers, form)
    for where, lost in dec.losses.items():
        if where == "inf":
            M = max(form.polynomial, default=0) + 1
            assert lost <= _loss_bound(F, M, "infinity", len(g) - 1) + 1e-9
        else:
            M = max(form.principal[where], default=0)
            kind = "weierstrass" if centers[where].weierstrass else "nonweierstrass"
            assert lost <= _loss_bound(F, M, kind)


def test_simple_pole_at_nonweierstrass_centre_is_residue():
    F = FieldDescriptor(7, N=30)
    g = _poly.from_roots(F, [F(0), F(1), F(2)])
    centers = [Center(F(3), False)]
    form = MeromorphicForm([{1: F(5)}], {})
    dec = cohomology_class(g, centers, form)
    assert dec.d[0].equals(F(5))
    assert all(c.is_zero() for c in dec.c)


def test_exact_differential_has_no_class():
    F = FieldDescriptor(7, N=30)
    g = _poly.from_roots(F, [F(0), F(1), F(2)])
    # d(x y) = (2 g + x g') dx/2y
    gp = _poly.derivative(g)
    poly = {}
    for i, c in enumerate(g):
        poly[i] = poly.get(i, F.zero()) + 2 * c
    for i, c in enumerate(gp):
        poly[i + 1] = poly.get(i + 1, F.zero()) + c
    dec = cohomology_class(g, [], MeromorphicForm([], poly))
    assert all(c.is_zero() or c.valuation() >= 25 for c in dec.c)
    assert dec.poly_terms[1].equals(F(1))


def test_weierstrass_centre_must_be_root():
    F = FieldDescriptor(7, N=30)
    g = _poly.from_roots(F, [F(0), F(1), F(2)])
    with pytest.raises(HypothesisViolated):
        cohomology_class(g, [Center(F(3), True)], MeromorphicForm([{2: F(1)}], {}))


def test_principal_part_at_infinity():
    F = FieldDescriptor(7, N=10)
    form = MeromorphicForm([], {0: F(1), 2: F(3), 5: F(2)})
    assert sorted(principal_part(form, "inf", 3).coeffs) == [2, 5]
