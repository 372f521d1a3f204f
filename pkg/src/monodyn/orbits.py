"""Certified n-cycles at fixed parameters, their stability and magnitude,
and bisection recovery of the parameter values where cycle counts change.

Enumeration isolates every real root of the cycle polynomial C_n, then
refines each root's isolating interval until its image under F falls
inside exactly one other root's maximal isolating interval. That yields
the permutation induced by F on the period-n points; its cycles are the
orbits.
"""

import logging
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import _intpoly as ip
from ._fmt import decimal_str
from .errors import CertificationError, DomainError, NonhyperbolicParameterError
from .exactalg import derivative
from .models import MODEL1, STANDARD, cycle_poly_ints, model1, model2
from .oracles import magnitude_oracles
from .realroots import CLOSED, OPEN, RatInterval, _isolate_squarefree, _Refiner, interval_eval_pair, sturm_count

log = logging.getLogger(__name__)

STABLE = "stable"
UNSTABLE = "unstable"
NONHYPERBOLIC = "nonhyperbolic"

MAX_ORDER = 6
REFINE_BUDGET = 64


@dataclass(frozen=True)
class Orbit:
    order: int
    points: tuple  # RatIntervals in cyclic order, smallest point first
    multiplier: RatInterval | None = None
    stability: str | None = None

    def midpoints(self):
        return [p.lo if p.is_point else p.midpoint for p in self.points]

    def as_floats(self):
        return [float(v) for v in self.midpoints()]


# ---------------------------------------------------------------------------
# per-(map, n) root data
# ---------------------------------------------------------------------------


class _CycleRoots:
    """Real roots of C_n with a refiner; intervals are refined in place."""

    def __init__(self, m, n):
        if n < 1:
            raise DomainError("cycle order must be positive")
        if n > MAX_ORDER:
            raise DomainError(f"order {n} exceeds the degree guard (n <= {MAX_ORDER})")
        self.m = m
        self.n = n
        p = cycle_poly_ints(m, n)
        if not ip.is_squarefree(p):
            g = ip.gcd_poly(p, ip.deriv(p))
            raise NonhyperbolicParameterError(
                f"C_{n} has a multiple root at {m.label()} (squarefree defect of degree {len(g) - 1})"
            )
        for k in range(1, n):
            if n % k == 0:
                ck = cycle_poly_ints(m, k)
                if not ip.coprime_modular(p, ck) and len(ip.gcd_poly(p, ck)) > 1:
                    raise NonhyperbolicParameterError(
                        f"C_{n} and C_{k} share a root at {m.label()}"
                    )
        self.p = p
        self.ref = _Refiner(p)
        self.ivs = _isolate_squarefree(p)
        self.F = tuple(m.update.coeffs)
        self.dF = tuple(derivative(m.update).coeffs)

    def halve(self, i):
        iv = self.ivs[i]
        if not iv.is_point:
            self.ivs[i] = self.ref.bisect(iv, iv.width / 2)
        return self.ivs[i]

    def target(self, j):
        """Maximal isolating interval of root j: between its neighbours' intervals."""
        lo = self.ivs[j - 1].hi if j > 0 else None
        hi = self.ivs[j + 1].lo if j + 1 < len(self.ivs) else None
        return lo, hi

    def image_index(self, i):
        """Index j with F(interval i) inside root j's maximal isolating interval."""
        for _ in range(REFINE_BUDGET + 1):
            iv = self.ivs[i]
            a, b = interval_eval_pair(self.F, iv.lo, iv.hi)
            los = [v.lo for v in self.ivs]
            his = [v.hi for v in self.ivs]
            # Root intervals meeting the closed enclosure [a, b]; an open
            # interval only touching an endpoint does not count.
            window = range(max(bisect_left(his, a) - 1, 0), min(bisect_right(los, b) + 1, len(self.ivs)))
            hits = [j for j in window if _meets(self.ivs[j], a, b)]
            if iv.is_point:
                # An exact root maps exactly onto another root.
                if len(hits) == 1:
                    return hits[0]
                break
            if len(hits) == 1:
                j = hits[0]
                lo, hi = self.target(j)
                if (lo is None or a > lo) and (hi is None or b < hi):
                    return j
            self.halve(i)
        raise CertificationError(
            f"could not certify the image of root interval {self.ivs[i]} "
            f"within {REFINE_BUDGET} halvings"
        )

    def is_positive(self, i):
        iv = self.ivs[i]
        return iv.lo > 0 or (iv.lo == 0 and not iv.is_point)


def _meets(v, a, b):
    if v.is_point or v.kind == CLOSED:
        return v.lo <= b and v.hi >= a
    return v.lo < b and v.hi > a


_ROOT_CACHE = {}


def _roots(m, n):
    key = (m.key, n)
    r = _ROOT_CACHE.get(key)
    if r is None:
        if len(_ROOT_CACHE) > 32:
            _ROOT_CACHE.clear()
        r = _CycleRoots(m, n)
        _ROOT_CACHE[key] = r
    return r


def cycle_point_counts(m, n):
    """(real roots of C_n, positive real roots of C_n), all simple."""
    r = _roots(m, n)
    return len(r.ivs), sum(r.is_positive(i) for i in range(len(r.ivs)))


# ---------------------------------------------------------------------------
# enumeration and stability
# ---------------------------------------------------------------------------


def enumerate_cycles(m, n, classify=True, positive_only=True):
    """All distinct n-cycles with every point positive, canonicalized.

    With ``positive_only=False`` every real n-cycle is returned, including
    cycles through zero or negative points (outside the economic domain).
    Raises NonhyperbolicParameterError when C_n has a multiple root or
    shares a root with a lower-order cycle polynomial.
    """
    r = _roots(m, n)
    N = len(r.ivs)
    image = {}
    seen = set()
    orbits = []
    for start in range(N):
        if start in seen or (positive_only and not r.is_positive(start)):
            continue
        chain = [start]
        ok = True
        i = start
        while True:
            if i not in image:
                image[i] = r.image_index(i)
            i = image[i]
            if i == start:
                break
            if i in chain:
                raise CertificationError("image map is not a permutation of the cycle points")
            chain.append(i)
            if not r.is_positive(i):
                ok = False
        seen.update(chain)
        if len(chain) != n:
            raise CertificationError(f"found a cycle of length {len(chain)} among period-{n} points")
        if ok or not positive_only:
            k = min(range(n), key=lambda t: r.ivs[chain[t]].lo)
            orbits.append(chain[k:] + chain[:k])
    orbits.sort(key=lambda c: r.ivs[c[0]].lo)
    out = []
    for chain in orbits:
        orb = Orbit(n, tuple(r.ivs[i] for i in chain))
        if classify:
            orb = _classify(r, chain)
        else:
            orb = Orbit(n, tuple(r.ivs[i] for i in chain))
        out.append(orb)
    return out


def _product(encs):
    lo, hi = Fraction(1), Fraction(1)
    for a, b in encs:
        ps = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(ps), max(ps)
    return lo, hi


def _multiplier(r, chain):
    return _product(interval_eval_pair(r.dF, r.ivs[i].lo, r.ivs[i].hi) for i in chain)


def _classify(r, chain):
    stability = NONHYPERBOLIC
    for step in range(REFINE_BUDGET + 1):
        lo, hi = _multiplier(r, chain)
        if -1 < lo and hi < 1:
            stability = STABLE
            break
        if lo > 1 or hi < -1:
            stability = UNSTABLE
            break
        if step == REFINE_BUDGET or all(r.ivs[i].is_point for i in chain):
            break
        for i in chain:
            r.halve(i)
    return Orbit(len(chain), tuple(r.ivs[i] for i in chain), RatInterval(lo, hi, CLOSED), stability)


def _chain_of(r, orbit):
    idx = []
    for p in orbit.points:
        hits = [i for i, iv in enumerate(r.ivs) if not iv.disjoint(p) or iv.inside(p) or p.inside(iv)]
        hits = [i for i in hits if _same_root(r, r.ivs[i], p)]
        if len(hits) != 1:
            raise CertificationError(f"orbit point {p} does not match one root of C_{r.n}")
        idx.append(hits[0])
    return idx


def _same_root(r, a, b):
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo > hi:
        return False
    if lo == hi:
        return r.ref.sign(lo) == 0
    return True


def classify_stability(m, orbit):
    """Stability tag of a certified orbit from its refined multiplier enclosure."""
    if orbit.stability is not None and orbit.stability != NONHYPERBOLIC:
        return orbit.stability
    r = _roots(m, orbit.order)
    return _classify(r, _chain_of(r, orbit)).stability


def multiplier_at(m, orbit, i, width=Fraction(1, 10**6)):
    """Enclosure of (F^n)' at points[i] by interval evaluation along the orbit.

    Evaluates F' on the interval image chain starting at points[i], which
    differs from the stored product by the ordering of interval roundings.
    """
    n = orbit.order
    r = _roots(m, n)
    chain = _chain_of(r, orbit)
    while True:
        iv = r.ivs[chain[i]]
        a, b = iv.lo, iv.hi
        encs = []
        for _ in range(n):
            encs.append(interval_eval_pair(r.dF, a, b))
            a, b = interval_eval_pair(r.F, a, b)
        lo, hi = _product(encs)
        if hi - lo <= width or iv.is_point:
            return RatInterval(lo, hi, CLOSED)
        for j in chain:
            r.halve(j)


# ---------------------------------------------------------------------------
# magnitude
# ---------------------------------------------------------------------------


def _sq(lo, hi):
    if lo >= 0:
        return lo * lo, hi * hi
    if hi <= 0:
        return hi * hi, lo * lo
    return Fraction(0), max(lo * lo, hi * hi)


def _magnitude_enc(ivs):
    n = len(ivs)
    lo = hi = Fraction(0)
    for i in range(n):
        a, b = ivs[i], ivs[(i + 1) % n]
        s_lo, s_hi = _sq(b.lo - a.hi, b.hi - a.lo)
        lo += s_lo
        hi += s_hi
    return lo, hi


def magnitude(m, orbit, width=Fraction(1, 10**8), check=True):
    """Enclosure of d = sum of squared consecutive differences around the cycle.

    When a published magnitude polynomial exists for (model, n), the
    enclosure is required to bracket one of its roots.
    """
    width = Fraction(width)
    if width <= 0:
        raise DomainError("width must be positive")
    n = orbit.order
    if n == 1:
        return RatInterval.point(0)
    r = _roots(m, n)
    chain = _chain_of(r, orbit)
    for _ in range(4 * REFINE_BUDGET):
        lo, hi = _magnitude_enc([r.ivs[i] for i in chain])
        if hi - lo <= width or all(r.ivs[i].is_point for i in chain):
            break
        for i in chain:
            r.halve(i)
    else:
        raise CertificationError("magnitude enclosure did not shrink to the requested width")
    enc = RatInterval(lo, hi, CLOSED)
    if check and magnitude_oracles(m, n) is not None and oracle_match(m, n, enc) is None:
        raise CertificationError(f"magnitude enclosure {enc} brackets no root of the published polynomials")
    return enc


def oracle_match(m, n, enc):
    """Index of the first published magnitude polynomial with a root in enc, or None."""
    polys = magnitude_oracles(m, n)
    if polys is None:
        return None
    for k, q in enumerate(polys):
        if q.degree < 1:
            continue
        if sturm_count(q, RatInterval(enc.lo, enc.hi, CLOSED)) > 0:
            return k
    return None


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


def model2_family(K):
    """Model 2 with the standard (a, b, c, d) at K."""
    return model2(K)


@dataclass(frozen=True)
class model1_family_f:
    """Model 1 with e fixed, parametrized by f (picklable)."""

    e: Fraction

    def __call__(self, f):
        return model1(self.e, f)


@dataclass(frozen=True)
class Bracket:
    interval: RatInterval
    left: tuple  # (orbit count, stable count) just below
    right: tuple  # ... just above


@dataclass
class ThresholdReport:
    order: int
    search: RatInterval
    tol: Fraction
    brackets: list = field(default_factory=list)
    retries: list = field(default_factory=list)  # (original probe, used probe, reason)
    probes: int = 0

    def midpoints(self):
        return [b.interval.midpoint for b in self.brackets]

    def signatures(self):
        if not self.brackets:
            return []
        return [self.brackets[0].left] + [b.right for b in self.brackets]


def signature(m, n):
    """(orbit count, stable count); nonhyperbolic orbits raise."""
    orbits = enumerate_cycles(m, n)
    bad = [o for o in orbits if o.stability == NONHYPERBOLIC]
    if bad:
        raise NonhyperbolicParameterError(f"{len(bad)} orbit(s) with multiplier enclosure straddling +-1")
    return len(orbits), sum(o.stability == STABLE for o in orbits)


def _probe(family, n, t, tol, lo=None, hi=None):
    # Returns (signature, used parameter, retry note or None).
    step = tol / 10
    note = None
    for attempt in range(8):
        try:
            return signature(family(t), n), t, note
        except NonhyperbolicParameterError as exc:
            t2 = t + step
            if hi is not None and t2 >= hi:
                t2 = t - step
            if lo is not None and t2 <= lo:
                t2 = (t + (lo if t2 <= lo else hi)) / 2
            log.info("probe %s nonhyperbolic (%s); retrying at %s", t, exc, t2)
            note = (note[0] if note else t, t2, str(exc))
            t = t2
    raise NonhyperbolicParameterError(f"probe near {t} stayed nonhyperbolic after retries")


def _probe_job(args):
    family, n, t, tol = args
    return _probe(family, n, t, tol)


def find_thresholds(n, search, tol, family=model2_family, grid=16, threads=1):
    """Brackets of width <= tol around every change of (orbit count, stable count).

    ``search`` is a RatInterval (or (lo, hi) pair) of the family parameter.
    A bracket whose sides differ in orbit count but not in stable count may
    hide two nearby events, so it keeps being bisected down to tol/64.
    """
    if not isinstance(search, RatInterval):
        search = RatInterval(Fraction(search[0]), Fraction(search[1]), OPEN)
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if n > 5:
        raise DomainError("thresholds are supported for n <= 5")
    lo, hi = search.lo, search.hi
    report = ThresholdReport(n, search, tol)
    # Evenly spaced probes; the two end probes sit tol/4 inside the interval
    # so changes within tol/4 of an end are not reported.
    pts = [lo + (hi - lo) * Fraction(i, grid) for i in range(grid + 1)]
    pts[0] = lo + tol / 4
    pts[-1] = hi - tol / 4
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_probe_job, [(family, n, t, tol) for t in pts]))
    else:
        results = [_probe(family, n, t, tol) for t in pts]
    samples = []
    for (sig, t, note) in results:
        report.probes += 1
        if note:
            report.retries.append(note)
        samples.append((t, sig))
    floor = tol / 64
    stack = [(a, b) for a, b in zip(samples, samples[1:]) if a[1] != b[1]]
    found = []
    while stack:
        (a, sa), (b, sb) = stack.pop()
        compound = sa[0] != sb[0] and sa[1] == sb[1]
        if b - a <= tol and (not compound or b - a <= floor):
            found.append(Bracket(RatInterval(a, b, OPEN), sa, sb))
            continue
        sig, t, note = _probe(family, n, (a + b) / 2, tol, a, b)
        report.probes += 1
        if note:
            report.retries.append(note)
        if sig == sa:
            stack.append(((t, sig), (b, sb)))
        elif sig == sb:
            stack.append(((a, sa), (t, sig)))
        else:
            stack.append(((t, sig), (b, sb)))
            stack.append(((a, sa), (t, sig)))
    found.sort(key=lambda br: br.interval.lo)
    report.brackets = found
    return report


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def format_orbits(orbits, places=10):
    """One line per orbit: order, stability, multiplier enclosure, point midpoints."""
    lines = []
    for o in orbits:
        mult = "none" if o.multiplier is None else (
            f"[{decimal_str(o.multiplier.lo, places)},{decimal_str(o.multiplier.hi, places)}]"
        )
        pts = ",".join(decimal_str(v, places) for v in o.midpoints())
        lines.append(f"n={o.order} stability={o.stability} multiplier={mult} points={pts}")
    return "\n".join(lines)


def format_thresholds(report, places=10):
    lines = [f"# order={report.order} search={report.search} tol={report.tol} probes={report.probes}"]
    for b in report.brackets:
        iv = b.interval
        lines.append(
            f"bracket lo={iv.lo} hi={iv.hi} mid={decimal_str(iv.midpoint, places)} "
            f"left={b.left[0]},{b.left[1]} right={b.right[0]},{b.right[1]}"
        )
    for orig, used, why in report.retries:
        lines.append(f"# retry {orig} -> {used}: {why}")
    return "\n".join(lines)


__all__ = [
    "Orbit",
    "Bracket",
    "ThresholdReport",
    "STABLE",
    "UNSTABLE",
    "NONHYPERBOLIC",
    "enumerate_cycles",
    "classify_stability",
    "cycle_point_counts",
    "multiplier_at",
    "magnitude",
    "oracle_match",
    "signature",
    "find_thresholds",
    "model2_family",
    "model1_family_f",
    "format_orbits",
    "format_thresholds",
    "STANDARD",
    "MODEL1",
]
