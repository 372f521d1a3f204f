from fractions import Fraction

import pytest
from hypothesis import given, settings

from monodyn.errors import DomainError, NonhyperbolicParameterError
from monodyn.models import model1, model2
from monodyn.orbits import (
    NONHYPERBOLIC,
    STABLE,
    UNSTABLE,
    _roots,
    classify_stability,
    cycle_point_counts,
    enumerate_cycles,
    find_thresholds,
    format_orbits,
    format_thresholds,
    magnitude,
    model1_family_f,
    multiplier_at,
    oracle_match,
)
from monodyn.oracles import model1_two_cycle_magnitude
from monodyn.realroots import CLOSED, RatInterval, interval_eval_pair

from conftest import rationals

F = Fraction


def _stable(orbits):
    return sum(o.stability == STABLE for o in orbits)


# -- published examples -------------------------------------------------------


def test_model1_unique_four_cycle():
    orbits = enumerate_cycles(model1(F(3, 5), F(6, 5)), 4)
    assert len(orbits) == 1 and orbits[0].stability == STABLE


def test_model2_three_cycles_at_3303():
    orbits = enumerate_cycles(model2(F(3303, 1000)), 3)
    assert (len(orbits), _stable(orbits)) == (8, 2)


@pytest.mark.parametrize("e", [F(1, 2), 1, F(3, 2), 2])
@pytest.mark.parametrize("f", [F(1, 2), 1, F(3, 2), 2])
def test_model1_has_no_three_cycles(e, f):
    assert enumerate_cycles(model1(e, f), 3) == []


def test_model2_two_cycles_at_K2():
    orbits = enumerate_cycles(model2(2), 2)
    assert (len(orbits), _stable(orbits)) == (3, 2)


def test_model1_equilibrium_unstable_at_unit_parameters():
    (eq,) = enumerate_cycles(model1(1, 1), 1)
    assert eq.stability == UNSTABLE


def test_model2_two_cycle_magnitudes_at_K2():
    m = model2(2)
    # d = (24K+80)/K = 64 for one orbit and (6K-10)/K = 1 for the other two.
    vals = sorted(magnitude(m, o, F(1, 10**10)).midpoint for o in enumerate_cycles(m, 2))
    assert [round(float(v), 8) for v in vals] == [1.0, 1.0, 64.0]


def test_model1_two_cycle_magnitude_root():
    m = model1(1, 1)
    (orb,) = enumerate_cycles(m, 2)
    d = magnitude(m, orb, F(1, 10**9))
    q = model1_two_cycle_magnitude()
    at = [q.evaluate({"e": 1, "f": 1, "d": v}) for v in (d.lo, d.hi)]
    assert at[0] * at[1] < 0


def test_model2_four_cycle_magnitudes_match_oracles():
    m = model2(F(3319885, 1000000))
    for o in enumerate_cycles(m, 4):
        assert oracle_match(m, 4, magnitude(m, o, F(1, 10**9))) is not None


def test_order_guard():
    with pytest.raises(DomainError):
        enumerate_cycles(model2(3), 7)


def test_nonhyperbolic_parameter_detected():
    # K = 5/3 is the fold where the 2-cycles are born.
    with pytest.raises(NonhyperbolicParameterError):
        enumerate_cycles(model2(F(5, 3)), 2)


def test_thresholds_order_two():
    rep = find_thresholds(2, (1, 3), F(1, 10**8))
    mids = rep.midpoints()
    assert len(mids) == 2
    assert abs(mids[0] - F(5, 3)) < F(1, 10**8)
    # (5 sqrt 5 - 5) / 3 bracketed by rationals.
    br = rep.brackets[1].interval
    assert (3 * br.lo + 5) ** 2 < 125 < (3 * br.hi + 5) ** 2
    assert br.hi - br.lo <= F(1, 10**8)
    assert rep.signatures() == [(0, 0), (3, 2), (3, 0)]
    assert "bracket" in format_thresholds(rep)


def test_thresholds_order_three():
    rep = find_thresholds(3, (2, 4), F(1, 10**8))
    printed = [F("2.417401607"), F("2.434714456"), F("3.302953127"), F("3.303122765")]
    mids = rep.midpoints()
    assert len(mids) == 4
    assert all(abs(a - b) < F(1, 10**6) for a, b in zip(mids, printed))
    assert rep.signatures() == [(0, 0), (4, 2), (4, 0), (8, 2), (8, 0)]


def test_model1_family_thresholds_along_f():
    # Equilibrium loses stability at e^2 f^3 = 8/27, i.e. f = 2/3 when e = 1.
    rep = find_thresholds(1, (F(1, 2), F(4, 5)), F(1, 10**6), family=model1_family_f(F(1)))
    (br,) = rep.brackets
    assert br.interval.lo < F(2, 3) < br.interval.hi
    assert (br.left, br.right) == ((1, 1), (1, 0))


def test_format_orbits_lines():
    text = format_orbits(enumerate_cycles(model2(2), 2))
    assert len(text.splitlines()) == 3 and "stability=stable" in text


# -- invariants ---------------------------------------------------------------

# Parameter probes away from the printed thresholds.
K_PROBES = [F(1, 2), F(3, 2), F(2), F(23, 10), F(121, 50), F(5, 2), F(3), F(3303, 1000), F(33, 10), F(7, 2)]
M1_PROBES = [(1, F(1, 2)), (1, 1), (F(3, 5), F(6, 5)), (1, F(88, 100)), (F(3, 2), F(4, 5))]


def _maps():
    return [model2(K) for K in K_PROBES] + [model1(e, f) for e, f in M1_PROBES]


def _land_inside(r, src, dst):
    # Refine the source until its interval image lies inside the destination interval.
    F_ = r.F
    for _ in range(200):
        a, b = interval_eval_pair(F_, src.lo, src.hi)
        if RatInterval(a, b, CLOSED).inside(dst):
            return True
        if src.is_point:
            return False
        src = r.ref.bisect(src, src.width / 2)
    return False


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cycle_closure(n):
    for m in _maps():
        r = _roots(m, n)
        for o in enumerate_cycles(m, n, positive_only=False):
            pts = o.points
            for i in range(n):
                assert _land_inside(r, pts[i], pts[(i + 1) % n])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_multiplier_enclosures_overlap(n):
    for m in _maps():
        for o in enumerate_cycles(m, n):
            encs = [multiplier_at(m, o, i, F(1, 10**6)) for i in range(n)]
            for u in encs:
                for v in encs:
                    assert not u.disjoint(v)
                assert u.lo <= o.multiplier.hi and o.multiplier.lo <= u.hi


def _positive(iv):
    # An isolating interval with lo = 0 holds a positive root unless it is the point 0.
    return iv.lo > 0 or (iv.lo == 0 and not iv.is_point)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_root_grouped(n):
    for m in _maps():
        real, positive = cycle_point_counts(m, n)
        every = enumerate_cycles(m, n, positive_only=False, classify=False)
        admissible = enumerate_cycles(m, n, classify=False)
        # No orphan roots: the real cycles use every real root exactly once.
        assert len(every) * n == real
        # Positive roots = points of all-positive orbits + positive points of mixed cycles.
        mixed = [o for o in every if o not in admissible]
        mixed_pos = sum(_positive(p) for o in mixed for p in o.points)
        assert len(admissible) * n + mixed_pos == positive
        if not mixed:
            assert len(admissible) * n == positive


def test_near_coincident_three_cycles_are_distinct():
    m = model2(F(3303, 1000))
    orbits = enumerate_cycles(m, 3)
    stable = [o for o in orbits if o.stability == STABLE]
    unstable = [o for o in orbits if o.stability != STABLE]
    close = 0
    for s in stable:
        for u in unstable:
            if all(abs(float(p.midpoint - q.midpoint)) < 0.01 for p, q in zip(s.points, u.points)):
                close += 1
                assert all(p.disjoint(q) for p, q in zip(s.points, u.points))
    assert close == 2


@settings(max_examples=25)
@given(rationals(F(1, 4), F(7, 2), 1000))
def test_stability_tags_are_certified(K):
    try:
        orbits = enumerate_cycles(model2(K), 2)
    except NonhyperbolicParameterError:
        return
    for o in orbits:
        if o.stability == STABLE:
            assert -1 < o.multiplier.lo and o.multiplier.hi < 1
        elif o.stability == UNSTABLE:
            assert o.multiplier.lo > 1 or o.multiplier.hi < -1
        else:
            assert o.stability == NONHYPERBOLIC
        assert classify_stability(model2(K), o) == o.stability
