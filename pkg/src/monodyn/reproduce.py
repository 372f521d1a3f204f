"""Canonical reproduction runs, each diffed against a shipped golden file.

A golden file holds tab-separated records ``key<TAB>value[<TAB>tol]``.
Records with a tolerance compare numerically, the rest compare as exact
strings. Golden values come from two sources: numbers printed in the
published tables (transcribed by hand) and outputs computed here once
and frozen (figure summaries).
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ._fmt import decimal_str
from .errors import NonhyperbolicParameterError
from .models import MODEL1, cycle_poly, model1, model2, model2_condition_polys, stability_system
from .orbits import STABLE, enumerate_cycles, find_thresholds, magnitude
from .semialg import count_solutions

OUT_ENV = "MONODYN_OUT"


@dataclass
class Mismatch:
    key: str
    expected: str
    got: str


def golden_path(name):
    return resources.files("monodyn").joinpath("golden", f"{name}.txt")


def read_golden(name):
    """[(key, value, tol or None)] in file order."""
    text = golden_path(name).read_text()
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        tol = Fraction(parts[2]) if len(parts) > 2 else None
        out.append((parts[0], parts[1], tol))
    return out


def compare(records, golden):
    """First mismatch between produced records and golden entries, or None."""
    got = dict(records)
    for key, value, tol in golden:
        if key not in got:
            return Mismatch(key, value, "<missing>")
        g = got[key]
        if tol is None:
            if g != value:
                return Mismatch(key, value, g)
        else:
            try:
                ok = abs(Fraction(g) - Fraction(value)) <= tol
            except (ValueError, ZeroDivisionError):
                ok = False
            if not ok:
                return Mismatch(key, f"{value} +- {tol}", g)
    extra = [k for k, _ in records if k not in {k2 for k2, _, _ in golden}]
    if extra:
        return Mismatch(extra[0], "<absent>", got[extra[0]])
    return None


def _sign(s):
    return "+" if s > 0 else ("-" if s < 0 else "0")


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def equilibrium_probes(out=None):
    """Stable-equilibrium count and R1, R2 signs at the published probes."""
    conds = model2_condition_polys()
    S = stability_system(2)
    records = []
    for key, _, _ in read_golden("table1"):
        a, b, c, d, K = (Fraction(v) for v in key.split(","))
        vals = {"a": a, "b": b, "c": c, "d": d, "K": K}
        n = count_solutions(S.subs(vals))
        s = conds.signs(vals)
        records.append((key, f"{n} {_sign(s['R1'])} {_sign(s['R2'])}"))
    return records


def interval_probe(lo, hi):
    """A rational inside (lo, hi): the midpoint, or just above lo when unbounded."""
    lo = Fraction(lo)
    if hi == "inf":
        return lo + Fraction(1, 1000)
    return (lo + Fraction(hi)) / 2


def _cycle_table(name, n):
    records = []
    for key, _, _ in read_golden(name):
        lo, hi = key.split(":")
        K = interval_probe(lo, hi)
        orbits = enumerate_cycles(model2(K), n)
        records.append((key, f"{len(orbits)} {sum(o.stability == STABLE for o in orbits)}"))
    return records


def cycles3(out=None):
    return _cycle_table("table3", 3)


def cycles4(out=None):
    return _cycle_table("table4", 4)


def cycles5(out=None):
    return _cycle_table("table5", 5)


_SEARCH = {3: (Fraction(2), Fraction(4)), 4: (Fraction(2), Fraction(17, 5)), 5: (Fraction(2), Fraction(167, 50))}


def threshold_records(report, printed, tol):
    """Match printed thresholds to bracket midpoints; unmatched brackets become extras."""
    mids = [b.interval.midpoint for b in report.brackets]
    used = set()
    records = []
    for i, m in enumerate(printed, 1):
        j = min(range(len(mids)), key=lambda k: abs(mids[k] - m)) if mids else None
        if j is None or abs(mids[j] - m) > tol or j in used:
            records.append((f"m{i}", "<no bracket>"))
            continue
        used.add(j)
        records.append((f"m{i}", decimal_str(mids[j], 10)))
    k = 0
    for j, b in enumerate(report.brackets):
        if j not in used:
            k += 1
            records.append((f"extra{k}", decimal_str(mids[j], 10)))
            records.append((f"extra{k}-counts", f"{b.left[0]},{b.left[1]}->{b.right[0]},{b.right[1]}"))
    return records


def _thresholds(name, n, threads=1):
    printed = []
    for key, _, _ in read_golden(name):
        lo, hi = key.split(":")
        if hi != "inf":
            printed.append(Fraction(hi))
    tol = Fraction(1, 10**7)
    report = find_thresholds(n, _SEARCH[n], tol, threads=threads)
    return threshold_records(report, printed, Fraction(1, 10**6))


def thresholds3(out=None, threads=1):
    return _thresholds("table3", 3, threads)


def thresholds4(out=None, threads=1):
    return _thresholds("table4", 4, threads)


def thresholds5(out=None, threads=1):
    return _thresholds("table5", 5, threads)


# ---------------------------------------------------------------------------
# figure counterparts
# ---------------------------------------------------------------------------


def _orbit_records(m, n, places=6):
    orbits = enumerate_cycles(m, n)
    recs = [("orbits", str(len(orbits))), ("stable", str(sum(o.stability == STABLE for o in orbits)))]
    for i, o in enumerate(orbits):
        d = magnitude(m, o, Fraction(1, 10**9))
        pts = ",".join(decimal_str(v, places) for v in _refined_midpoints(m, o))
        recs.append((f"orbit{i}", f"{o.stability} d={decimal_str(d.midpoint, places)} points={pts}"))
    return recs


def _refined_midpoints(m, o):
    from .realroots import refine

    C = cycle_poly(m, o.order)
    return [refine(C, p, Fraction(1, 10**12)).midpoint if not p.is_point else p.lo for p in o.points]


def four_cycle_model1(out=None):
    """The unique 4-cycle of Model 1 at e=3/5, f=6/5."""
    return _orbit_records(model1(Fraction(3, 5), Fraction(6, 5)), 4)


def three_cycles_model2(out=None):
    return _orbit_records(model2(Fraction(3303, 1000)), 3)


def four_cycles_model2(out=None):
    return _orbit_records(model2(Fraction(3319885, 1000000)), 4)


def five_cycles_model2(out=None):
    m = model2(Fraction(333296183, 100000000))
    orbits = enumerate_cycles(m, 5)
    return [("orbits", str(len(orbits))), ("stable", str(sum(o.stability == STABLE for o in orbits)))]


def magnitude_three_cycles(out=None):
    """3-cycle magnitudes over a K sweep; each must match the published quartic."""
    from .orbits import oracle_match

    recs = []
    for K in (Fraction(121, 50), Fraction(3), Fraction(3303, 1000), Fraction(7, 2)):
        m = model2(K)
        ds = []
        for o in enumerate_cycles(m, 3):
            d = magnitude(m, o, Fraction(1, 10**9))
            ok = oracle_match(m, 3, d) is not None
            ds.append(decimal_str(d.midpoint, 6) + ("" if ok else "!"))
        recs.append((f"K={K}", " ".join(sorted(ds, key=lambda s: float(s.rstrip("!"))))))
    return recs


def stability_plane_model1(out=None):
    """Which of equilibrium, 2-cycle and 4-cycle is stable on an (e, f) grid.

    Each cell is classified exactly; the record counts cells whose class
    disagrees with the level sets of e^2 f^3 (expected 0).
    """
    S = stability_system(MODEL1)
    b2 = (Fraction(61) - 11 * _sqrt17_hi()) / 27, (Fraction(61) - 11 * _sqrt17_lo()) / 27
    counts = {"equilibrium": 0, "2-cycle": 0, "4-cycle": 0, "other": 0}
    bad = 0
    skipped = 0
    steps = [Fraction(i, 10) for i in range(2, 21, 2)]
    for e in steps:
        for f in steps:
            s = e * e * f**3
            m = model1(e, f)
            try:
                cls = _model1_class(S, m, e, f)
            except NonhyperbolicParameterError:
                skipped += 1
                continue
            counts[cls] += 1
            if s < Fraction(8, 27):
                want = "equilibrium"
            elif s < b2[0]:
                want = "2-cycle"
            elif b2[1] < s < Fraction(6673871142, 10**10) - Fraction(1, 10**9):
                want = "4-cycle"
            elif s > Fraction(6673871142, 10**10) + Fraction(1, 10**9):
                want = "other"
            else:
                skipped += 1
                continue
            bad += cls != want
    return [(k, str(v)) for k, v in counts.items()] + [("level-set-counterexamples", str(bad)),
                                                          ("near-boundary", str(skipped))]


def _model1_class(S, m, e, f):
    if count_solutions(S.subs({"e": e, "f": f})) == 1:
        return "equilibrium"
    if any(o.stability == STABLE for o in enumerate_cycles(m, 2)):
        return "2-cycle"
    if any(o.stability == STABLE for o in enumerate_cycles(m, 4)):
        return "4-cycle"
    return "other"


def _sqrt17_lo():
    return Fraction(4123105625, 10**9)


def _sqrt17_hi():
    return Fraction(4123105626, 10**9)


def stability_plane_model2(out=None):
    """Stable-equilibrium counts on an (a, K) grid; exact count vs sign conditions."""
    conds = model2_condition_polys()
    S = stability_system(2)
    hist = {0: 0, 1: 0, 2: 0}
    agree = 0
    total = 0
    for i in range(26):
        a = Fraction(5, 2) + Fraction(i, 10)
        for j in range(1, 31):
            K = Fraction(j, 10)
            vals = {"a": a, "K": K, "b": Fraction(12, 5), "c": Fraction(3, 5), "d": Fraction(1, 20)}
            if any(p.sign_at(vals) == 0 for p in (conds.R1, conds.R2, conds.R3, conds.R4)):
                continue
            n = count_solutions(S.subs(vals))
            hist[n] += 1
            total += 1
            agree += n == conds.stable_equilibria(vals)
    return [(f"cells-{k}", str(v)) for k, v in hist.items()] + [("agree", f"{agree}/{total}")]


def _out_dir(out):
    if out is None:
        out = os.environ.get(OUT_ENV)
    if out is None:
        return None
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def bif2d_model1(out=None):
    from .sim import bifurcation_2d

    g = bifurcation_2d(1, {}, ("e", 0.6, 1.6, 101), ("f", 0.6, 1.6, 101), 0.5)
    d = _out_dir(out)
    if d:
        (d / "bif2d_model1.ppm").write_bytes(g.to_ppm())
    # Period-1 cells must match e^2 f^3 < 8/27 away from the curve, where
    # the multiplier is near -1 and convergence is too slow to detect.
    import numpy as np

    e = np.linspace(0.6, 1.6, 101)
    E, F = np.meshgrid(e, e)
    s = E**2 * F**3
    near = np.abs(s - 8 / 27) <= 0.02
    mismatch = ((g.cells == 1) != (s < 8 / 27)) & ~near
    return _histogram(g.cells) + [("period1-boundary-mismatch", str(int(mismatch.sum())))]


def bif2d_model2(out=None):
    from .sim import bifurcation_2d

    g = bifurcation_2d(2, {"b": 2.4, "c": 0.6, "d": 0.05}, ("a", 2.5, 5.0, 101), ("K", 0.0, 3.0, 121), 1.0)
    d = _out_dir(out)
    if d:
        (d / "bif2d_model2.ppm").write_bytes(g.to_ppm())
    # Compare with the exact stable-equilibrium count per cell. Cells next to
    # a change of the exact count are boundary cells and are not scored.
    import numpy as np

    conds = model2_condition_polys()
    theory = np.zeros(g.cells.shape, dtype=int)
    for i in range(121):
        K = Fraction(3 * i, 120)
        for j in range(101):
            a = Fraction(5, 2) + Fraction(5 * j, 200)
            vals = {"a": a, "K": K, "b": Fraction(12, 5), "c": Fraction(3, 5), "d": Fraction(1, 20)}
            theory[i, j] = conds.stable_equilibria(vals) if K > 0 else -1
    pad = np.pad(theory, 1, mode="edge")
    interior = np.ones(theory.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            interior &= pad[1 + di:1 + di + theory.shape[0], 1 + dj:1 + dj + theory.shape[1]] == theory
    interior &= theory >= 0
    p1 = g.cells == 1
    outside = p1 & (theory == 0) & interior
    return _histogram(g.cells) + [
        ("period1-in-unstable-region", str(int(outside.sum()))),
        ("stable-region-cells", str(int(((theory > 0) & interior).sum()))),
        ("stable-region-period1", str(int((p1 & (theory > 0) & interior).sum()))),
    ]


def _histogram(cells):
    import numpy as np

    vals, cnt = np.unique(cells, return_counts=True)
    return [(f"period{int(v)}", str(int(c))) for v, c in zip(vals, cnt)]


def bif1d_model1(out=None):
    from .sim import bifurcation_1d

    b = bifurcation_1d(1, {"e": 1.0}, "f", 0.6, 1.6, 10001, 1.1)
    d = _out_dir(out)
    if d:
        (d / "bif1d_model1.csv").write_text(b.to_csv())
    eight = [v for v, p in zip(b.values, b.periods) if p == 8 and 0.86 < v < 0.9]
    return [
        ("onset-period2", f"{b.onsets(2)[0]:.4f}"),
        ("onset-period4", f"{b.onsets(4)[0]:.4f}"),
        ("period8-window", f"{min(eight):.4f}:{max(eight):.4f}"),
    ]


def bif1d_model2_K(out=None):
    from .sim import bifurcation_1d

    fixed = {"a": 3.3, "b": 2.4, "c": 0.6, "d": 0.05}
    recs = []
    for x0 in (1.0, 4.0):
        b = bifurcation_1d(2, fixed, "K", 0.001, 3.0, 3000, x0)
        d = _out_dir(out)
        if d:
            (d / f"bif1d_model2_K_x0_{x0:g}.csv").write_text(b.to_csv())
        lows = [v for v, p, s in zip(b.values, b.periods, b.samples) if p == 1 and abs(s[-1] - 1.058) < 1e-3]
        highs = [v for v, p, s in zip(b.values, b.periods, b.samples) if p == 1 and abs(s[-1] - 4.384) < 1e-3]
        recs.append((f"x0={x0:g} branch-1.058", f"{min(lows):.3f}:{max(lows):.3f}" if lows else "none"))
        recs.append((f"x0={x0:g} branch-4.384", f"{min(highs):.3f}:{max(highs):.3f}" if highs else "none"))
    return recs


def bif1d_model2_a(out=None):
    from .sim import bifurcation_1d

    fixed = {"K": 2.2, "b": 2.4, "c": 0.6, "d": 0.05}
    recs = []
    for x0 in (1.0, 4.0):
        b = bifurcation_1d(2, fixed, "a", 2.5, 5.0, 2501, x0)
        d = _out_dir(out)
        if d:
            (d / f"bif1d_model2_a_x0_{x0:g}.csv").write_text(b.to_csv())
        p1 = [v for v, p in zip(b.values, b.periods) if p == 1]
        recs.append((f"x0={x0:g} period1-range", f"{min(p1):.3f}:{max(p1):.3f}" if p1 else "none"))
        recs.append((f"x0={x0:g} period1-cells", str(len(p1))))
    return recs


def basin_lists(out=None):
    """Basin boundaries for the two published two-equilibrium examples."""
    from .sim import basins

    recs = []
    d = _out_dir(out)
    for tag, m in (("K=1/2,a=7/2", model2(Fraction(1, 2), a=Fraction(7, 2))), ("K=1,a=4", model2(1, a=4))):
        r = basins(m, 0.0, 10.0, 10000)
        if d:
            (d / f"basins_{tag.replace('/', '-').replace(',', '_')}.csv").write_text(r.to_csv())
        for x, lab, s in r.attractors:
            recs.append((f"{tag} attractor {lab}", f"{x:.2f} {s}"))
        for cls in sorted(r.intervals):
            ivs = " ".join(f"{lo:.3f}:{hi:.3f}" for lo, hi in r.intervals[cls])
            recs.append((f"{tag} {cls}", ivs))
    return recs


TARGETS = {
    "equilibrium-probes": equilibrium_probes,
    "cycles3": cycles3,
    "cycles4": cycles4,
    "cycles5": cycles5,
    "thresholds3": thresholds3,
    "thresholds4": thresholds4,
    "thresholds5": thresholds5,
    "stability-plane-model2": stability_plane_model2,
    "four-cycle-model1": four_cycle_model1,
    "stability-plane-model1": stability_plane_model1,
    "bif2d-model1": bif2d_model1,
    "bif1d-model1": bif1d_model1,
    "three-cycles-model2": three_cycles_model2,
    "magnitude-three-cycles": magnitude_three_cycles,
    "four-cycles-model2": four_cycles_model2,
    "five-cycles-model2": five_cycles_model2,
    "bif2d-model2": bif2d_model2,
    "bif1d-model2-K": bif1d_model2_K,
    "bif1d-model2-a": bif1d_model2_a,
    "basins": basin_lists,
}

# Short names used for the printed tables.
ALIASES = {"table1": "equilibrium-probes", "table3": "cycles3", "table4": "cycles4", "table5": "cycles5"}

# Targets whose golden file is not named after the target.
_GOLDEN = {"equilibrium-probes": "table1", "cycles3": "table3", "cycles4": "table4", "cycles5": "table5"}


def golden_name(target):
    return _GOLDEN.get(target, target)


def run_target(name, out=None, threads=1):
    """(records, mismatch or None) for a target, compared with its golden file."""
    name = ALIASES.get(name, name)
    if name not in TARGETS:
        raise KeyError(f"unknown target {name!r}; known: {', '.join(sorted(TARGETS))}")
    fn = TARGETS[name]
    if name.startswith("thresholds"):
        records = fn(out, threads=threads)
    else:
        records = fn(out)
    golden = read_golden(golden_name(name))
    return records, _compare_golden(name, records, golden)


def _compare_golden(name, records, golden):
    # The table files key cycle counts by interval; their value is the count pair.
    return compare(records, golden)


def write_golden(name, records, header, tol=None):
    """Freeze records into the package golden directory (development helper)."""
    path = Path(str(golden_path(golden_name(ALIASES.get(name, name)))))
    lines = [f"# {header}"]
    for k, v in records:
        lines.append(f"{k}\t{v}" + (f"\t{tol}" if tol is not None else ""))
    path.write_text("\n".join(lines) + "\n")
    return path
