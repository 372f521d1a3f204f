from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodyn.errors import DivisibilityError, DomainError
from monodyn.exactalg import (
    ParamPoly,
    UniPoly,
    arith,
    compose,
    derivative,
    discriminant,
    equal_up_to_constant,
    exact_div,
    gcd_squarefree,
    resultant,
    symbols,
)
from monodyn.models import model1, model2, power

from conftest import int_polys

e, f, a, b, c, d, K = symbols("e f a b c d K")
x = UniPoly.x()


def uni(cs):
    return UniPoly.from_ints(cs)


# -- worked examples --------------------------------------------------------


def test_derivative_of_model1_update():
    F = x + f * (e - x**3)
    assert derivative(F) == 1 - 3 * f * x**2


def test_derivative_of_model2_update():
    F = x + K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
    assert derivative(F) == 1 + K * (-2 * b + 6 * c * x - 12 * d * x**2)


def test_model1_second_iterate_degree_and_leading_coefficient():
    F = x + f * (e - x**3)
    FF = compose(F, F)
    assert FF.degree == 9
    assert FF.lc == f**4
    # Spot check against direct double evaluation.
    m = model1(Fraction(2, 3), Fraction(5, 4))
    P = power(m, 2)
    for q in (Fraction(-3, 7), Fraction(0), Fraction(1, 2), Fraction(9, 5), Fraction(-2)):
        vals = {"e": Fraction(2, 3), "f": Fraction(5, 4)}
        assert FF.subs(vals)(q) == m.update(m.update(q)) == P(q)


def test_model1_two_cycle_quotient_matches_printed_sextic():
    F = x + f * (e - x**3)
    Q = exact_div(compose(F, F) - x, F - x)
    printed = (f**3 * x**6 - 3 * f**2 * x**4 - 2 * e * f**3 * x**3 + 3 * f * x**2
               + 3 * e * f**2 * x + e**2 * f**3 - 2)
    assert equal_up_to_constant(Q, printed)


def test_published_resultants_and_discriminant():
    assert resultant(x**3 - e, 2 - 3 * f * x**2) == -27 * e**2 * f**3 + 8
    assert resultant(x**3 - e, x) == e
    P = K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
    assert resultant(P, x) == -K * a
    assert discriminant(x**3 - e) == 27 * e**2


def test_model2_discriminant_matches_R1_up_to_constant():
    from monodyn.models import printed_condition_polys

    P = K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
    R1 = printed_condition_polys().R1
    assert ParamPoly.coerce(discriminant(P)).equal_up_to_constant(-16 * K**5 * d * R1)


def test_exact_div_rejects_nondivisor():
    with pytest.raises(DivisibilityError):
        exact_div(x**2 + 1, x - 1)


def test_variable_mismatch_is_domain_error():
    with pytest.raises(DomainError):
        arith(UniPoly.x("x"), UniPoly.x("y"), "add")


def test_resultant_of_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        resultant(UniPoly([]), x)


# -- invariants ---------------------------------------------------------------


def _nonconstant_gcd(F, G):
    g = gcd_squarefree(F, G)
    return g.degree >= 1


def test_resultant_vanishes_iff_common_factor_small_sweep():
    # Exhaustive over monic-or-not quadratics and linears with coefficients in {-1,0,1}.
    vals = (-1, 0, 1)
    linears = [uni([p, q]) for p, q in product(vals, repeat=2) if q != 0]
    quads = [uni([p, q, r]) for p, q, r in product(vals, repeat=3) if r != 0]
    for F in quads:
        for G in linears + quads:
            assert (resultant(F, G) == 0) == _nonconstant_gcd(F, G)


@settings(max_examples=1000)
@given(int_polys(6, min_degree=1), int_polys(6, min_degree=1), int_polys(2, min_degree=0))
def test_resultant_vanishes_iff_common_factor(fc, gc, hc):
    F, G, H = uni(fc), uni(gc), uni(hc)
    # Mix in a shared factor half the time so both branches are exercised.
    if len(hc) > 1:
        F, G = F * H, G * H
    if F.degree > 6 or G.degree > 6:
        return
    assert (resultant(F, G) == 0) == _nonconstant_gcd(F, G)


@settings(max_examples=300)
@given(int_polys(6, min_degree=1), int_polys(6, min_degree=1))
def test_resultant_antisymmetry(fc, gc):
    F, G = uni(fc), uni(gc)
    sign = -1 if (F.degree * G.degree) % 2 else 1
    assert resultant(F, G) == sign * resultant(G, F)


@settings(max_examples=300)
@given(int_polys(6), int_polys(5, lo=-7, hi=7))
def test_exact_div_inverts_mul(qc, gc):
    Q, G = uni(qc), uni(gc)
    assert exact_div(arith(Q, G, "mul"), G) == Q


@settings(max_examples=150)
@given(int_polys(3), int_polys(3), int_polys(3))
def test_compose_associative(pc, qc, rc):
    P, Q, R = uni(pc), uni(qc), uni(rc)
    assert compose(compose(P, Q), R) == compose(P, compose(Q, R))


@settings(max_examples=300)
@given(int_polys(5, min_degree=1), int_polys(3, min_degree=1))
def test_squarefree_part_has_nonzero_discriminant(pc, qc):
    P = uni(pc) * uni(qc) ** 2
    S = gcd_squarefree(P)
    if S.degree >= 1:
        assert discriminant(S) != 0


@settings(max_examples=100)
@given(st.integers(-4, 4), st.integers(1, 5), st.integers(-4, 4))
def test_paramcoefficient_resultant_specializes(p, q, r):
    # Resultant commutes with specialization when leading coefficients survive.
    F = x**3 - e
    G = f * x**2 + r
    vals = {"e": Fraction(p), "f": Fraction(q)}
    lhs = ParamPoly.coerce(resultant(F, G)).evaluate(vals)
    assert lhs == resultant(F.subs(vals), G.subs(vals))


def test_model2_update_standard_parameters():
    m = model2(1)
    expected = [Fraction(18, 5), Fraction(-24, 5) + 1, Fraction(9, 5), Fraction(-1, 5)]
    assert list(m.update.coeffs) == expected
