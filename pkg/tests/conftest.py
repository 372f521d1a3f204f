from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("default")


def small_ints(lo=-5, hi=5):
    return st.integers(min_value=lo, max_value=hi)


def int_polys(max_degree=6, lo=-5, hi=5, min_degree=0):
    """Integer coefficient lists (constant term first) with nonzero leading coefficient."""
    return st.lists(small_ints(lo, hi), min_size=min_degree + 1, max_size=max_degree + 1).filter(
        lambda cs: cs[-1] != 0
    )


def rationals(lo, hi, max_den=64):
    """Fractions in the closed range [lo, hi] with bounded denominators."""
    lo, hi = Fraction(lo), Fraction(hi)

    @st.composite
    def build(draw):
        den = draw(st.integers(1, max_den))
        a = int(lo * den) - 1
        b = int(hi * den) + 1
        num = draw(st.integers(a, b))
        v = Fraction(num, den)
        return min(max(v, lo), hi)

    return build()


@pytest.fixture
def fr():
    return Fraction


# Published basin lists for Model 2 at the standard (b, c, d), keyed by
# (K, a); each entry maps an equilibrium's approximate value to its intervals.
PUBLISHED_BASINS = {
    (Fraction(1, 2), Fraction(7, 2)): {
        1.19: [(0, 3.168), (6.518, 7.577), (7.745, 7.781), (7.786, 7.789)],
        4.64: [(3.168, 6.518), (7.577, 7.745), (7.781, 7.786)],
    },
    (Fraction(1), Fraction(4)): {
        4.99: [(0, 0.807), (2.0, 6.192), (6.431, 6.647), (6.653, 6.659)],
        1.99: [(0.807, 2.0), (6.192, 6.431), (6.647, 6.653)],
    },
}


def basin_mismatches(report, published, tol=2e-3):
    """Boundary disagreements between a BasinReport and a published list.

    Each published interval needs a computed interval of the same attractor
    with both ends within ``tol``. Computed intervals narrower than ``tol``
    lie below the published resolution and are not required to appear.
    """
    bad = []
    for value, ivs in published.items():
        x, label, _ = min(report.attractors, key=lambda a: abs(a[0] - value))
        if abs(x - value) > 0.02:
            bad.append((value, "no attractor"))
            continue
        got = report.basin(label)
        for lo, hi in ivs:
            if not any(abs(a - lo) <= tol and abs(b - hi) <= tol for a, b in got):
                bad.append((value, (lo, hi)))
        for a, b in got:
            if b - a > tol and not any(abs(a - lo) <= tol and abs(b - hi) <= tol for lo, hi in ivs):
                bad.append((value, "extra", (a, b)))
    return bad


# One line per acceptance criterion, printed at the end of the session.
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
