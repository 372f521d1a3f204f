"""Floating-point iteration: trajectories, period detection, bifurcation
diagrams and basins of attraction.

All iteration goes through the backend kernels in ``monodyn.kernels``, so
results are bit-identical for a given configuration and backend.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DomainError, InsufficientDataError, NonhyperbolicParameterError
from .exactalg import derivative
from .models import MODEL1, MODEL2, PARAM_NAMES, _model_tag

BURN_IN = 10000
WINDOW = 256
TOL = 1e-6
BOUND = 1e6
MAX_PERIOD = 24
DIVERGENT = -1
COMPLEX = MAX_PERIOD

MATCH_TOL = 1e-3
BISECT_STEPS = 20

# Palette index p colours period p (1..23); index 24 (complex or divergent)
# is black; index 0 is the white background.
PALETTE = [
    (255, 255, 255),
    (255, 190, 120), (240, 228, 66), (86, 180, 233), (0, 158, 115),
    (213, 94, 0), (204, 121, 167), (0, 114, 178), (230, 159, 0),
    (140, 86, 75), (148, 103, 189), (23, 190, 207), (188, 189, 34),
    (255, 127, 14), (44, 160, 44), (214, 39, 40), (31, 119, 180),
    (174, 199, 232), (255, 152, 150), (197, 176, 213), (196, 156, 148),
    (247, 182, 210), (199, 199, 199), (219, 219, 141),
    (0, 0, 0),
]


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------


def float_coeffs(model, params):
    """(c0, c1, c2, c3) of F for float (or array) parameters."""
    model = _model_tag(model)
    p = {k: np.asarray(v, dtype=np.float64) for k, v in params.items()}
    for k, v in p.items():
        if not np.all(np.isfinite(v)):
            raise DomainError(f"parameter {k} is not finite")
    if model == MODEL1:
        e, f = p["e"], p["f"]
        return f * e, np.ones_like(f * e), np.zeros_like(f * e), -f
    a, b, c, d, K = (p[n] for n in PARAM_NAMES[MODEL2])
    one = np.ones_like(K * a * b * c * d)
    return K * a * one, (1 - 2 * K * b) * one, 3 * K * c * one, -4 * K * d * one


def map_coeffs(m):
    """Float coefficients of an exact IterMap's update."""
    cs = [float(c) for c in m.update.coeffs] + [0.0] * 4
    return tuple(cs[:4])


def map_params(m):
    return {k: float(v) for k, v in m.params.items()}


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------


PERIODIC = "converged-periodic"
APERIODIC = "aperiodic"
DIVERGED = "divergent"


@dataclass
class Trajectory:
    x0: float
    burn_in: int
    samples: np.ndarray
    outcome: str
    order: int | None = None
    points: list = field(default_factory=list)

    def to_dict(self):
        return {
            "x0": self.x0,
            "burn_in": self.burn_in,
            "steps": int(len(self.samples)),
            "outcome": self.outcome,
            "order": self.order,
            "points": [float(v) for v in self.points],
        }


def simulate(m, x0, burn_in=BURN_IN, steps=WINDOW, bound=BOUND, tol=TOL, max_period=MAX_PERIOD):
    """Iterate ``m`` (IterMap or coefficient tuple) from x0 in double precision."""
    if burn_in < 1 or steps < 1:
        raise DomainError("burn_in and steps must be at least 1")
    cs = m if isinstance(m, tuple) else map_coeffs(m)
    if not all(math.isfinite(c) for c in cs) or not math.isfinite(x0):
        raise DomainError("non-finite parameter or initial state")
    samples, div = kernels.cubic_orbit(*cs, float(x0), burn_in, steps, bound)
    samples = np.asarray(samples, dtype=np.float64)
    if div >= 0:
        return Trajectory(float(x0), burn_in, samples, DIVERGED)
    t = Trajectory(float(x0), burn_in, samples, APERIODIC)
    if steps >= 2 * max_period:
        p = detect_period(t, max_period, tol)
        if p < max_period:
            t.outcome = PERIODIC
            t.order = p
            t.points = sorted(samples[-p:].tolist())
    return t


def detect_period(t, max_period=MAX_PERIOD, tol=TOL):
    """Smallest p < max_period with |x[k+p] - x[k]| < tol*max(1, |x[k]|) over the window.

    Returns max_period (the 'complex' marker) when no such p exists.
    """
    x = t.samples if isinstance(t, Trajectory) else np.asarray(t, dtype=np.float64)
    if isinstance(t, Trajectory) and t.outcome == DIVERGED:
        raise DomainError("trajectory diverged")
    if len(x) < 2 * max_period:
        raise InsufficientDataError(f"window of {len(x)} samples is shorter than 2*max_period")
    scale = np.maximum(1.0, np.abs(x))
    for p in range(1, max_period):
        if np.all(np.abs(x[p:] - x[:-p]) < tol * scale[:-p]):
            return p
    return max_period


def periods(cs, x0, burn_in=BURN_IN, window=WINDOW, max_period=MAX_PERIOD, tol=TOL, bound=BOUND, threads=1):
    """Vectorized period markers for flat coefficient arrays (kernel hot path)."""
    cs = [np.array(np.broadcast_to(c, np.shape(x0)), dtype=np.float64).ravel() for c in cs]
    x0 = np.array(x0, dtype=np.float64).ravel()
    n = len(x0)
    if threads <= 1 or n < 2 * threads:
        return kernels.cubic_periods(*cs, x0, burn_in, window, max_period, tol, bound)
    # The compiled kernel releases the GIL; chunks are merged in index order.
    edges = np.linspace(0, n, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(
            lambda ab: kernels.cubic_periods(*(c[ab[0]:ab[1]] for c in cs), x0[ab[0]:ab[1]],
                                             burn_in, window, max_period, tol, bound),
            zip(edges[:-1], edges[1:]),
        ))
    return np.concatenate(parts).astype(np.int32)


def _limits(cs, x0, burn_in, bound=BOUND):
    cs = [np.array(np.broadcast_to(c, np.shape(x0)), dtype=np.float64).ravel() for c in cs]
    return kernels.cubic_limits(*cs, np.array(x0, dtype=np.float64).ravel(), burn_in, bound)


# ---------------------------------------------------------------------------
# bifurcation diagrams
# ---------------------------------------------------------------------------


@dataclass
class Bif1D:
    name: str
    values: np.ndarray
    samples: np.ndarray  # (len(values), window); nan after divergence
    periods: np.ndarray

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "sample_index", "x", "period"])
        for v, row, p in zip(self.values, self.samples, self.periods):
            for k, x in enumerate(row):
                w.writerow([repr(float(v)), k, repr(float(x)), int(p)])
        return buf.getvalue()

    def onsets(self, period):
        """Parameter values where the detected period first equals ``period`` after differing."""
        out = []
        for i in range(1, len(self.values)):
            if self.periods[i] == period and self.periods[i - 1] != period:
                out.append(float(self.values[i]))
        return out


def bifurcation_1d(model, fixed, name, lo, hi, res, x0, burn_in=BURN_IN, window=WINDOW,
                   tol=TOL, max_period=MAX_PERIOD, threads=1):
    """Post-burn-in samples and detected period at ``res`` evenly spaced values."""
    if res < 2:
        raise DomainError("resolution must be at least 2")
    model = _model_tag(model)
    vals = np.linspace(float(lo), float(hi), int(res))
    params = {k: float(v) for k, v in fixed.items()}
    params[name] = vals
    _check_params(model, params)
    cs = float_coeffs(model, params)
    x0s = np.full(vals.shape, float(x0))
    per = periods(cs, x0s, burn_in, window, max_period, tol, threads=threads)
    x = _limits(cs, x0s, burn_in)
    c0, c1, c2, c3 = (np.broadcast_to(c, vals.shape) for c in cs)
    samples = np.empty((len(vals), window))
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(window):
            x = c0 + x * (c1 + x * (c2 + x * c3))
            samples[:, k] = x
    samples[per == DIVERGENT] = np.nan
    return Bif1D(name, vals, samples, per)


def _check_params(model, params):
    names = PARAM_NAMES[model]
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join(missing)}")
    extra = set(params) - set(names)
    if extra:
        raise DomainError(f"unknown parameter(s): {', '.join(sorted(extra))}")


@dataclass
class BifGrid:
    axes: tuple  # ((name, lo, hi, res), (name, lo, hi, res)): x axis then y axis
    cells: np.ndarray  # shape (res_y, res_x); row 0 is the lowest y value

    @property
    def shape(self):
        return self.cells.shape

    def palette_indices(self):
        idx = self.cells.copy()
        idx[(idx < 1) | (idx >= MAX_PERIOD)] = MAX_PERIOD
        return idx

    def to_ppm(self):
        """Binary P6 image; y increases upward, so the top row is the highest y."""
        idx = self.palette_indices()[::-1]
        pal = np.array(PALETTE, dtype=np.uint8)
        rgb = pal[idx]
        h, w = idx.shape
        return b"P6\n%d %d\n255\n" % (w, h) + rgb.tobytes()


def bifurcation_2d(model, fixed, xaxis, yaxis, x0, burn_in=BURN_IN, window=WINDOW,
                   tol=TOL, max_period=MAX_PERIOD, threads=1):
    """Period marker per cell over a grid; each axis is (name, lo, hi, res)."""
    model = _model_tag(model)
    (nx, xlo, xhi, rx), (ny, ylo, yhi, ry) = xaxis, yaxis
    if rx < 2 or ry < 2:
        raise DomainError("resolutions must be at least 2")
    xs = np.linspace(float(xlo), float(xhi), int(rx))
    ys = np.linspace(float(ylo), float(yhi), int(ry))
    X, Y = np.meshgrid(xs, ys)
    params = {k: float(v) for k, v in fixed.items()}
    params[nx] = X
    params[ny] = Y
    _check_params(model, params)
    cs = float_coeffs(model, params)
    x0s = np.full(X.shape, float(x0))
    per = periods(cs, x0s, burn_in, window, max_period, tol, threads=threads)
    axes = ((nx, float(xlo), float(xhi), int(rx)), (ny, float(ylo), float(yhi), int(ry)))
    return BifGrid(axes, np.asarray(per).reshape(X.shape))


# ---------------------------------------------------------------------------
# basins
# ---------------------------------------------------------------------------


ESCAPE = "escape"


@dataclass
class BasinReport:
    attractors: list  # (value, label, stability)
    intervals: dict  # label -> [(lo, hi)], plus ESCAPE and "other:p" classes
    scan: tuple  # (lo, hi, res)

    def basin(self, label):
        return self.intervals.get(label, [])

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x0_lo", "x0_hi", "class"])
        rows = sorted((lo, hi, cls) for cls, ivs in self.intervals.items() for lo, hi in ivs)
        for lo, hi, cls in rows:
            w.writerow([f"{lo:.6f}", f"{hi:.6f}", cls])
        return buf.getvalue()

    def to_json(self):
        return json.dumps({
            "scan": {"lo": self.scan[0], "hi": self.scan[1], "res": self.scan[2]},
            "attractors": [{"value": v, "label": lab, "stability": s} for v, lab, s in self.attractors],
            "intervals": {k: [[lo, hi] for lo, hi in v] for k, v in self.intervals.items()},
        }, indent=2, sort_keys=True)


def equilibria(m):
    """Certified equilibria as (value, stability); a multiple root is tagged nonhyperbolic."""
    from .models import cycle_poly
    from .orbits import NONHYPERBOLIC, enumerate_cycles
    from .realroots import isolate_roots, refine

    C1 = cycle_poly(m, 1)
    width = Fraction(1, 10**12)

    def value(iv):
        iv = refine(C1, iv, width)
        return float(iv.lo) if iv.is_point else float(iv.midpoint)

    try:
        orbits = enumerate_cycles(m, 1)
        return [(value(o.points[0]), o.stability) for o in orbits]
    except NonhyperbolicParameterError:
        pass
    # A multiple root sits on a fold; certify the simple roots' |F'| by
    # refining until the interval enclosure of F' excludes +-1.
    from .realroots import CLOSED, RatInterval, interval_eval

    roots = isolate_roots(C1)
    dF = derivative(m.update)
    out = []
    for iv, mult in zip(roots.intervals, roots.multiplicities):
        if iv.hi is not None and iv.hi <= 0:
            continue
        if mult > 1:
            out.append((value(iv), NONHYPERBOLIC))
            continue
        w = iv.width if not iv.is_point else width
        tag = NONHYPERBOLIC
        for _ in range(64):
            iv = refine(C1, iv, w)
            enc = interval_eval(dF, RatInterval(iv.lo, iv.hi, CLOSED))
            if -1 < enc.lo and enc.hi < 1:
                tag = "stable"
                break
            if enc.lo > 1 or enc.hi < -1:
                tag = "unstable"
                break
            w /= 2
        out.append((value(iv), tag))
    return out


def basins(m, lo, hi, res, burn_in=BURN_IN, window=WINDOW, tol=TOL, match_tol=MATCH_TOL,
           bisect_steps=BISECT_STEPS, threads=1):
    """Classify initial states in [lo, hi] by attractor; refine class boundaries by bisection."""
    eqs = equilibria(m)
    candidates = [(x, s) for x, s in eqs if s in ("stable", "nonhyperbolic")]
    if not candidates:
        raise DomainError("map has no stable equilibrium")
    candidates.sort()
    labels = [f"E{i + 1}" for i in range(len(candidates))]
    cs = map_coeffs(m)
    lo, hi = float(lo), float(hi)
    xs = np.linspace(lo, hi, int(res)).tolist()

    def classify(x0):
        x0 = np.atleast_1d(np.asarray(x0, dtype=np.float64))
        per = periods(cs, x0, burn_in, window, MAX_PERIOD, tol, threads=threads)
        lim = _limits(cs, x0, burn_in + window)
        out = []
        for p, v in zip(per, lim):
            if p == DIVERGENT:
                out.append(ESCAPE)
                continue
            if p == 1:
                hit = [lab for (e, _), lab in zip(candidates, labels) if abs(v - e) < match_tol]
                if hit:
                    out.append(hit[0])
                    continue
            out.append(f"other:{int(p)}")
        return out

    cls = classify(xs)
    # Boundaries between neighbours of different class, bisected.
    cuts = []
    for i in range(len(xs) - 1):
        if cls[i] != cls[i + 1]:
            a, b = xs[i], xs[i + 1]
            ca = cls[i]
            for _ in range(bisect_steps):
                mid = 0.5 * (a + b)
                if classify(mid)[0] == ca:
                    a = mid
                else:
                    b = mid
            cuts.append(float(0.5 * (a + b)))
    intervals = {}
    edges = [lo] + cuts + [hi]
    run_classes = [cls[0]] + [cls[i + 1] for i in range(len(xs) - 1) if cls[i] != cls[i + 1]]
    for (a, b), c in zip(zip(edges, edges[1:]), run_classes):
        intervals.setdefault(c, []).append((a, b))
    attractors = [(x, lab, s) for (x, s), lab in zip(candidates, labels)]
    return BasinReport(attractors, intervals, (lo, hi, int(res)))


__all__ = [
    "BURN_IN",
    "WINDOW",
    "TOL",
    "BOUND",
    "MAX_PERIOD",
    "DIVERGENT",
    "COMPLEX",
    "PALETTE",
    "Trajectory",
    "Bif1D",
    "BifGrid",
    "BasinReport",
    "ESCAPE",
    "simulate",
    "detect_period",
    "periods",
    "bifurcation_1d",
    "bifurcation_2d",
    "equilibria",
    "basins",
    "float_coeffs",
    "map_coeffs",
]
