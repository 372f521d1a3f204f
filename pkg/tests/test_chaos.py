import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from monodyn.chaos import (
    PERIOD3,
    SNAPBACK,
    UNDETERMINED,
    certify_period3,
    certify_snapback,
    snapback_polynomial,
    snapback_status,
    verify_snapback_witness,
)
from monodyn.errors import DomainError
from monodyn.models import model1, model2
from monodyn.orbits import find_thresholds

from conftest import rationals

F = Fraction
LOW, HIGH = F(8, 27), F(64, 27)


def test_period3_certificate_above_first_threshold():
    cert = certify_period3(model2(F(242, 100)))
    assert cert.method == PERIOD3
    assert len(cert.witness.points) == 3
    assert all(c.holds() for c in cert.verified_conditions)
    assert "witness 3-cycle" in cert.report()


@pytest.mark.parametrize("m", [model2(2), model1(1, 1)])
def test_no_period3_certificate(m):
    assert certify_period3(m) is None


def test_snapback_at_unit_parameters():
    m = model1(1, 1)
    cert = certify_snapback(m)
    assert cert.method == SNAPBACK
    assert all(c.holds() for c in cert.verified_conditions)
    assert verify_snapback_witness(m, cert)
    text = cert.report()
    assert "(F'(x*))^2 - 1 >0" in text and "|y - x*| >0" in text


@pytest.mark.parametrize("f", [F(1, 2), F(2)])
def test_no_snapback_outside_region(f):
    assert certify_snapback(model1(1, f)) is None


def test_boundary_is_undetermined():
    # e^2 f^3 = 8/27 exactly: the equilibrium is nonhyperbolic.
    assert snapback_status(model1(1, F(2, 3))) == UNDETERMINED


def test_snapback_guards():
    with pytest.raises(DomainError):
        certify_snapback(model2(3))
    with pytest.raises(DomainError):
        certify_snapback(model1(1, 1), steps=3)
    with pytest.raises(DomainError):
        certify_snapback(model1(1, 1), steps=1)


def test_snapback_polynomial_vanishes_at_equilibrium():
    # x* = 1 when e = 1, and F^2(1) = 1.
    P = snapback_polynomial(model1(1, 1))
    assert P(F(1)) == 0


def _region_probes(seed=7, per_side=10, margin=F(1, 1000)):
    rng = random.Random(seed)
    inside, outside = [], []
    while len(inside) < per_side or len(outside) < per_side:
        e = F(rng.randint(1, 120), 40)
        f = F(rng.randint(1, 120), 40)
        s = e * e * f**3
        if LOW + margin < s < HIGH - margin and len(inside) < per_side:
            inside.append((e, f))
        elif (s < LOW - margin or s > HIGH + margin) and len(outside) < per_side:
            outside.append((e, f))
    return inside, outside


def test_region_sweep():
    inside, outside = _region_probes()
    for e, f in inside:
        m = model1(e, f)
        cert = certify_snapback(m)
        assert cert is not None and cert != UNDETERMINED, (e, f)
        assert verify_snapback_witness(m, cert)
    for e, f in outside:
        assert certify_snapback(model1(e, f)) is None, (e, f)


@settings(max_examples=30)
@given(rationals(F(1, 5), 3, 30), rationals(F(1, 5), 3, 30))
def test_snapback_matches_region(e, f):
    s = e * e * f**3
    assume(abs(s - LOW) >= F(1, 1000) and abs(s - HIGH) >= F(1, 1000))
    m = model1(e, f)
    cert = certify_snapback(m)
    if LOW < s < HIGH:
        assert cert is not None and verify_snapback_witness(m, cert)
    else:
        assert cert is None


def test_period3_consistent_with_thresholds():
    rep = find_thresholds(3, (2, 4), F(1, 10**7))
    edges = [F(2)] + [b.interval.midpoint for b in rep.brackets] + [F(4)]
    for (lo, hi), (count, _) in zip(zip(edges, edges[1:]), rep.signatures()):
        K = (lo + hi) / 2
        cert = certify_period3(model2(K))
        assert (cert is not None) == (count > 0), K
