import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodyn.errors import DomainError, InsufficientDataError
from monodyn.models import cycle_poly, model1, model2
from monodyn.orbits import STABLE, enumerate_cycles
from monodyn.realroots import refine
from monodyn.reproduce import read_golden
from monodyn.sim import (
    APERIODIC,
    DIVERGED,
    DIVERGENT,
    ESCAPE,
    MAX_PERIOD,
    PERIODIC,
    basins,
    bifurcation_1d,
    bifurcation_2d,
    detect_period,
    float_coeffs,
    map_coeffs,
    periods,
    simulate,
)

from conftest import PUBLISHED_BASINS, basin_mismatches

F = Fraction


def test_simulate_converges_to_low_equilibrium():
    t = simulate(model2(F(1, 2), a=F(7, 2)), 1.0)
    assert t.outcome == PERIODIC and t.order == 1
    assert abs(t.points[0] - 1.19) < 5e-3


def test_simulate_model1_fixed_point():
    t = simulate(model1(1, F(1, 2)), 1.0)
    assert t.order == 1 and t.points == [1.0]


def test_simulate_diverges():
    t = simulate(model2(F(1, 2), a=F(7, 2)), 8.0)
    assert t.outcome == DIVERGED
    with pytest.raises(DomainError):
        detect_period(t)


def test_simulate_guards():
    with pytest.raises(DomainError):
        simulate(model1(1, 1), 1.0, burn_in=0)
    with pytest.raises(DomainError):
        simulate((0.0, float("nan"), 0.0, 0.0), 1.0)


def test_short_window_is_aperiodic_marker():
    t = simulate(model1(1, F(1, 2)), 1.0, steps=10)
    assert t.outcome == APERIODIC
    with pytest.raises(InsufficientDataError):
        detect_period(t)


@pytest.mark.parametrize("f, period", [(F(7, 10), 2), (F(88, 100), 8)])
def test_detect_period_model1(f, period):
    assert detect_period(simulate(model1(1, f), 1.1)) == period


def test_detect_period_constant_tail():
    assert detect_period(np.full(100, 3.0)) == 1


def test_detect_period_prefers_true_order():
    # A 4-cycle whose halves differ by less than the tolerance would fool a
    # check on every other sample; the aligned check must still see 4.
    x = np.tile([1.0, 2.0, 1.0 + 1e-3, 2.0], 30)
    assert detect_period(x) == 4


def test_detect_period_complex_marker():
    x = np.random.default_rng(0).random(200)
    assert detect_period(x) == MAX_PERIOD


def test_bif1d_model1_onsets():
    b = bifurcation_1d(1, {"e": 1}, "f", 0.6, 1.6, 1001, 1.1)
    assert abs(b.onsets(2)[0] - 0.6665) <= 1e-3
    eight = [v for v, p in zip(b.values, b.periods) if p == 8]
    assert eight and min(eight) < 0.8826 and max(eight) > 0.8744


def test_bif1d_model2_branches():
    lo = bifurcation_1d(2, {"a": 3.3, "b": 2.4, "c": 0.6, "d": 0.05}, "K", 0.05, 1.15, 23, 1.0)
    assert np.all(lo.periods == 1)
    assert np.allclose(lo.samples[:, -1], 1.058, atol=1e-3)
    hi = bifurcation_1d(2, {"a": 3.3, "b": 2.4, "c": 0.6, "d": 0.05}, "K", 0.05, 1.15, 23, 4.0)
    assert np.allclose(hi.samples[:, -1], 4.384, atol=1e-3)


def test_bif_guards():
    with pytest.raises(DomainError):
        bifurcation_1d(1, {"e": 1}, "f", 0.6, 1.6, 1, 1.1)
    with pytest.raises(DomainError):
        bifurcation_1d(1, {}, "f", 0.6, 1.6, 5, 1.1)
    with pytest.raises(DomainError):
        bifurcation_2d(1, {}, ("e", 0.6, 1.6, 1), ("f", 0.6, 1.6, 4), 1.1)


def test_degenerate_grid():
    g = bifurcation_2d(1, {}, ("e", 0.6, 1.6, 2), ("f", 0.6, 1.6, 2), 0.5)
    assert g.shape == (2, 2)
    again = bifurcation_2d(1, {}, ("e", 0.6, 1.6, 2), ("f", 0.6, 1.6, 2), 0.5)
    assert g.to_ppm() == again.to_ppm()


def test_model1_grid_follows_boundary():
    res = 40
    g = bifurcation_2d(1, {}, ("e", 0.6, 1.6, res), ("f", 0.6, 1.6, res), 0.5)
    h = 1.0 / (res - 1)
    vals = np.linspace(0.6, 1.6, res)
    for j, f in enumerate(vals):
        for i, e in enumerate(vals):
            s = e * e * f**3
            # Cells within one cell width of the curve may go either way.
            near = min(abs((ee * ee * ff**3) - 8 / 27) for ee in (e - h, e, e + h) for ff in (f - h, f, f + h))
            if near < 2e-2:
                continue
            assert (g.cells[j, i] == 1) == (s < 8 / 27), (e, f)


def test_determinism():
    a = bifurcation_1d(1, {"e": 1}, "f", 0.6, 1.6, 101, 1.1)
    b = bifurcation_1d(1, {"e": 1}, "f", 0.6, 1.6, 101, 1.1)
    assert a.to_csv() == b.to_csv()
    g1 = bifurcation_2d(2, {"b": 2.4, "c": 0.6, "d": 0.05}, ("a", 2.5, 5, 30), ("K", 0, 3, 30), 1.0, threads=3)
    g2 = bifurcation_2d(2, {"b": 2.4, "c": 0.6, "d": 0.05}, ("a", 2.5, 5, 30), ("K", 0, 3, 30), 1.0)
    assert g1.to_ppm() == g2.to_ppm()
    m = model2(F(1, 2), a=F(7, 2))
    assert basins(m, 0, 10, 500).to_csv() == basins(m, 0, 10, 500).to_csv()


@settings(max_examples=10)
@given(st.randoms(use_true_random=False))
def test_grid_permutation_invariance(rng):
    K = np.linspace(0.0, 3.0, 64)
    flat = [np.broadcast_to(c, K.shape) for c in float_coeffs(2, {"a": 3.6, "b": 2.4, "c": 0.6, "d": 0.05, "K": K})]
    base = periods(flat, np.ones_like(K))
    order = list(range(len(K)))
    rng.shuffle(order)
    perm = periods([c[order] for c in flat], np.ones_like(K))
    assert np.array_equal(base[order], perm)


@pytest.mark.parametrize("key", sorted(PUBLISHED_BASINS))
def test_published_basins(key):
    K, a = key
    r = basins(model2(K, a=a), 0.0, 10.0, 10000)
    assert basin_mismatches(r, PUBLISHED_BASINS[key]) == []
    assert ESCAPE in r.intervals


def test_basin_intervals_partition_scan():
    r = basins(model2(1, a=4), 0.0, 10.0, 2000)
    ivs = sorted(iv for group in r.intervals.values() for iv in group)
    assert ivs[0][0] == 0.0 and ivs[-1][1] == 10.0
    for (a, b), (c, d) in zip(ivs, ivs[1:]):
        assert b == c and a < b


def test_single_attractor():
    r = basins(model2(F(1, 2), a=3), 0.0, 10.0, 10000)
    assert len(r.attractors) == 1
    assert set(r.intervals) == {"E1", ESCAPE}
    assert len(r.basin("E1")) == 1 and r.basin("E1")[0][0] == 0.0


def test_basins_require_stable_equilibrium():
    with pytest.raises(DomainError):
        basins(model2(3), 0, 10, 100)


# -- exact/numeric agreement --------------------------------------------------


def _stable_windows():
    wins = [(2, F(5, 3), F(206, 100))]
    for n, name in ((3, "table3"), (4, "table4"), (5, "table5")):
        for key, counts, _ in read_golden(name):
            lo, hi = key.split(":")
            if hi != "inf" and int(counts.split()[1]) > 0:
                wins.append((n, F(lo), F(hi)))
    return wins


def _agreement_probes(count=20, seed=11):
    rng = random.Random(seed)
    wins = _stable_windows()
    probes = []
    for i in range(count):
        n, lo, hi = wins[i % len(wins)] if i < len(wins) else rng.choice(wins)
        # Stay in the middle third, where the multiplier is clear of +-1.
        t = F(1, 3) + F(rng.randint(0, 1000), 3000)
        probes.append((n, lo + (hi - lo) * t))
    return probes


@pytest.mark.parametrize("n, K", _agreement_probes())
def test_exact_and_numeric_agree(n, K):
    m = model2(K)
    stable = [o for o in enumerate_cycles(m, n) if o.stability == STABLE]
    assert stable
    C = cycle_poly(m, n)
    for orb in stable:
        ivs = [refine(C, iv, F(1, 10**9)) for iv in orb.points]
        t = simulate(m, float(ivs[0].midpoint))
        assert t.outcome == PERIODIC and detect_period(t) == n
        for x in t.samples[-n:]:
            assert any(float(iv.lo) - 1e-6 <= x <= float(iv.hi) + 1e-6 for iv in ivs)


def test_divergent_marker_in_grid():
    per = periods(map_coeffs(model2(F(1, 2), a=F(7, 2))), np.array([1.0, 8.0]))
    assert per.tolist()[1] == DIVERGENT
