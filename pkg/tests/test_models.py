from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodyn.errors import DomainError
from monodyn.exactalg import UniPoly, compose, divmod_poly, equal_up_to_constant
from monodyn.models import (
    build_map,
    chain_multiplier,
    cycle_degree,
    cycle_poly,
    cycle_poly_ints,
    model1,
    model1_from_economic,
    model2,
    model2_condition_polys,
    multiplier_poly,
    power,
    stability_system,
)
from monodyn.semialg import count_solutions

from conftest import rationals

F = Fraction
x = UniPoly.x()

params1 = st.tuples(rationals(F(1, 8), 2, 16), rationals(F(1, 8), 2, 16))
Ks = rationals(F(1, 8), F(7, 2), 16)


def maps():
    return st.one_of(
        params1.map(lambda p: model1(*p)),
        Ks.map(model2),
    )


def test_build_map_validation():
    with pytest.raises(DomainError):
        build_map(1, e=1)
    with pytest.raises(DomainError):
        build_map(1, e=1, f=1, K=1)
    with pytest.raises(DomainError):
        build_map(2, K=0.5, a=1, b=1, c=1, d=1)
    with pytest.raises(DomainError):
        model1(-1, 1)


def test_cycle_degrees():
    assert power(model1(1, 1), 2).degree == 9
    assert cycle_degree(5) == 240 and len(cycle_poly_ints(model2(3), 5)) - 1 == 240
    assert power(model2(3), 5).degree == 243
    assert cycle_degree(6) == 3**6 - 3**3 - 3**2 + 3


def test_model1_low_order_cycle_polys():
    m = model1(F(2, 3), F(5, 4))
    e, f = m.params["e"], m.params["f"]
    assert equal_up_to_constant(cycle_poly(m, 1), x**3 - e)
    printed = (f**3 * x**6 - 3 * f**2 * x**4 - 2 * e * f**3 * x**3 + 3 * f * x**2
               + 3 * e * f**2 * x + e**2 * f**3 - 2)
    assert equal_up_to_constant(cycle_poly(m, 2), printed)


def test_multipliers_of_order_one():
    m = model1(F(2, 3), F(5, 4))
    assert multiplier_poly(m, 1) == 1 - 3 * F(5, 4) * x**2
    S = multiplier_poly(model2(F(7, 3)), 1)
    K = F(7, 3)
    assert S == 1 - K * (F(24, 5) - F(18, 5) * x + F(3, 5) * x**2)


def test_condition_signs_on_first_probes():
    conds = model2_condition_polys()
    vals = {"a": 1, "b": 1, "c": F(1, 4), "d": F(1, 64), "K": 1}
    assert conds.signs(vals)["R1"] < 0
    assert conds.signs(vals)["R2"] > 0


@settings(max_examples=12)
@given(maps(), st.integers(1, 5), st.data())
def test_power_composes(m, p, data):
    q = data.draw(st.integers(1, 6 - p))
    lhs = power(m, p + q)
    assert lhs == compose(power(m, p), power(m, q))


@settings(max_examples=20)
@given(maps(), st.integers(1, 6))
def test_lower_iterates_divide(m, n):
    P = power(m, n) - x
    for k in range(1, n):
        if n % k == 0:
            _, r = divmod_poly(P, power(m, k) - x)
            assert r.is_zero()


@settings(max_examples=15)
@given(maps(), st.integers(1, 6))
def test_cycle_factorization(m, n):
    prod = UniPoly([1])
    for k in range(1, n + 1):
        if n % k == 0:
            prod = prod * cycle_poly(m, k)
    assert equal_up_to_constant(prod, power(m, n) - x)


@settings(max_examples=20)
@given(maps(), st.integers(1, 5), st.lists(rationals(-3, 3, 32), min_size=10, max_size=10))
def test_chain_rule_multiplier(m, n, qs):
    D = multiplier_poly(m, n)
    for q in qs:
        assert D(q) == chain_multiplier(m, n, q)


@settings(max_examples=60)
@given(rationals(1, 4, 8), rationals(F(1, 4), 2, 8), rationals(0, F(7, 8), 8), rationals(F(1, 16), 1, 16))
def test_economic_threshold_matches_model1_system(a, b, cfrac, K):
    c = cfrac * a
    m = model1_from_economic(a, b, c, K)
    s = 4 * b * (a - c) ** 2 * K**3
    if s == F(8, 27):
        return
    e, f = m.params["e"], m.params["f"]
    assert e**2 * f**3 == s
    n = count_solutions(stability_system(1).subs({"e": e, "f": f}))
    assert (n == 1) == (s < F(8, 27))
