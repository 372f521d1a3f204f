"""Certified real-root isolation, counting and refinement.

All arithmetic is exact. Root isolation uses Descartes' rule of signs with
bisection on dyadic intervals; counting on arbitrary intervals uses Sturm
sequences; enclosures of polynomial ranges use rational interval Horner.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import _intpoly as ip
from . import kernels
from .errors import CertificationError, DomainError
from .exactalg import UniPoly

OPEN = "open"
CLOSED = "closed"
HALF_OPEN = "half-open"  # (lo, hi]


@dataclass(frozen=True)
class RatInterval:
    """Interval with rational endpoints; ``None`` stands for an infinite end."""

    lo: Fraction | None
    hi: Fraction | None
    kind: str = OPEN

    def __post_init__(self):
        lo = None if self.lo is None else Fraction(self.lo)
        hi = None if self.hi is None else Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if self.kind not in (OPEN, CLOSED, HALF_OPEN):
            raise DomainError(f"unknown interval kind {self.kind!r}")
        if lo is not None and hi is not None and lo > hi:
            raise DomainError(f"empty interval: lo {lo} > hi {hi}")

    @classmethod
    def point(cls, v):
        return cls(v, v, CLOSED)

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, CLOSED)

    @property
    def is_point(self):
        return self.lo is not None and self.lo == self.hi

    @property
    def width(self):
        if self.lo is None or self.hi is None:
            raise DomainError("unbounded interval has no width")
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, v):
        v = Fraction(v)
        if self.lo is not None:
            if v < self.lo or (v == self.lo and self.kind in (OPEN, HALF_OPEN) and not self.is_point):
                return False
        if self.hi is not None:
            if v > self.hi or (v == self.hi and self.kind == OPEN and not self.is_point):
                return False
        return True

    def inside(self, other):
        """True when every point of self lies in ``other``."""
        if other.lo is not None:
            if self.lo is None or self.lo < other.lo:
                return False
            if self.lo == other.lo and other.kind in (OPEN, HALF_OPEN) and not other.is_point:
                if self.kind == CLOSED or self.is_point:
                    return False
        if other.hi is not None:
            if self.hi is None or self.hi > other.hi:
                return False
            if self.hi == other.hi and other.kind == OPEN and not other.is_point:
                if self.kind in (CLOSED, HALF_OPEN) or self.is_point:
                    return False
        return True

    def disjoint(self, other):
        lo = max_end(self.lo, other.lo, low=True)
        hi = max_end(self.hi, other.hi, low=False)
        if lo is None or hi is None:
            return False
        if lo > hi:
            return True
        if lo < hi:
            return False
        return not (self.contains(lo) and other.contains(lo))

    def as_float(self):
        return (float(self.lo) if self.lo is not None else float("-inf"),
                float(self.hi) if self.hi is not None else float("inf"))

    def __str__(self):
        lb = "[" if self.kind == CLOSED else "("
        rb = "]" if self.kind in (CLOSED, HALF_OPEN) else ")"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{lb}{lo}, {hi}{rb}"


def max_end(a, b, low):
    # Tighter of two endpoints; None is infinite.
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b) if low else min(a, b)


@dataclass(frozen=True)
class RootList:
    """Isolating intervals for the distinct real roots of ``polynomial``."""

    polynomial: UniPoly
    intervals: tuple
    multiplicities: tuple
    factors: tuple  # primitive integer squarefree factor owning each interval

    def __len__(self):
        return len(self.intervals)

    def count_in(self, interval):
        return sum(1 for iv in self.intervals if iv.inside(interval))


# ---------------------------------------------------------------------------
# helpers on primitive integer polynomials
# ---------------------------------------------------------------------------


def _int_poly(F):
    if isinstance(F, UniPoly):
        if F.is_zero():
            raise DomainError("zero polynomial")
        return F.int_primitive()
    p = ip.primitive(F)
    if not p:
        raise DomainError("zero polynomial")
    return p


def _bound_bits(p):
    """b with every root of p of absolute value < 2^b (Fujiwara-style)."""
    n = len(p) - 1
    lead = abs(p[n]).bit_length()
    b = 0
    for i in range(n):
        if p[i]:
            k = n - i
            t = -(-(abs(p[i]).bit_length() - lead + 1) // k)
            b = max(b, t)
    return b + 2


def _dyadic(num, s):
    return Fraction(num, 1 << s) if s >= 0 else Fraction(num << (-s))


def _pow2_level(w):
    # s with w == 2^-s, or None when w is not a power of two.
    n, d = w.numerator, w.denominator
    if n == 1 and d & (d - 1) == 0:
        return d.bit_length() - 1
    if d == 1 and n & (n - 1) == 0:
        return -(n.bit_length() - 1)
    return None


def _positive_roots(p):
    # Isolating intervals (or points) for the roots of squarefree p in (0, inf);
    # requires p(0) != 0. Returns list of (lo, hi) Fractions, lo == hi for exact.
    n = len(p) - 1
    if n < 1 or kernels.sign_variations(p) == 0:
        return []
    b = _bound_bits(p)
    scaled = [p[i] << (b * i) for i in range(n + 1)]
    out = []
    for kind, c, k in kernels.descartes_unit(scaled):
        s = k - b
        if kind == 0:
            v = _dyadic(c, s)
            out.append((v, v))
        else:
            out.append((_dyadic(c, s), _dyadic(c + 1, s)))
    return out


def _isolate_squarefree(p):
    """Sorted isolating intervals of a squarefree primitive integer polynomial."""
    roots = []
    if p[0] == 0:
        roots.append((Fraction(0), Fraction(0)))
        p = p[1:]
    if len(p) > 1:
        roots.extend(_positive_roots(p))
        neg = [c if i % 2 == 0 else -c for i, c in enumerate(p)]
        roots.extend((-hi, -lo) for lo, hi in _positive_roots(neg))
    roots.sort()
    return [RatInterval.point(lo) if lo == hi else RatInterval(lo, hi, OPEN) for lo, hi in roots]


class _Refiner:
    """Exact sign oracle and bisection on one squarefree integer polynomial."""

    def __init__(self, p):
        self.p = p
        self.kern = kernels.IntPoly(p)

    def sign(self, v):
        v = Fraction(v)
        d = v.denominator
        if d & (d - 1) == 0:
            return self.kern.sign_dyadic(v.numerator, d.bit_length() - 1)
        return self.kern.sign_rational(v.numerator, d)

    def bisect(self, iv, width):
        """Halve an isolating interval until its width is at most ``width``."""
        if iv.is_point or iv.width <= width:
            return iv
        lo, hi = iv.lo, iv.hi
        w = hi - lo
        # An open interval may end on a neighbouring exact root. The sign
        # just inside lo is then the sign of p' there (the root is simple).
        s0 = self.sign(lo)
        slo = s0 if s0 != 0 else ip.sign_at(ip.deriv(self.p), lo)
        # Dyadic fast path: the kernel bisects internally from the sign at lo.
        s = _pow2_level(w) if s0 != 0 else None
        if s is not None:
            num = lo / _dyadic(1, s)
            if num.denominator == 1:
                target = s
                while _dyadic(1, target) > width:
                    target += 1
                kind, num2, s2 = self.kern.refine(int(num), s, target)
                if kind == 0:
                    return RatInterval.point(_dyadic(num2, s2))
                return RatInterval(_dyadic(num2, s2), _dyadic(num2 + 1, s2), OPEN)
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = self.sign(mid)
            if sm == 0:
                return RatInterval.point(mid)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return RatInterval(lo, hi, OPEN)


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------


def sturm_sequence(p):
    """Sturm chain of an integer polynomial, each member primitive up to sign."""
    p = list(p)
    seq = [p, ip.deriv(p)]
    if not seq[1]:
        return [p]
    while True:
        a, b = seq[-2], seq[-1]
        if len(b) < 2:
            break
        _, r = ip.pdivmod(a, b)
        if not r:
            break
        # prem multiplies a by lc(b)^(delta+1); restore the sign of -rem(a, b).
        delta = len(a) - len(b)
        flip = -1 if (b[-1] < 0 and (delta + 1) % 2 == 1) else 1
        g = ip.content(r)
        seq.append([-flip * c // g for c in r])
    return seq


def _sign_inf(q, positive):
    s = 1 if q[-1] > 0 else -1
    if not positive and (len(q) - 1) % 2 == 1:
        s = -s
    return s


def _variations(seq, x):
    signs = []
    for q in seq:
        if x is None or isinstance(x, str):
            signs.append(_sign_inf(q, x == "+inf"))
        else:
            signs.append(ip.sign_at(q, x))
    return kernels.sign_variations(signs)


def sturm_count(F, interval):
    """Number of distinct real roots of F in ``interval`` (honoring its kind)."""
    p = ip.squarefree(_int_poly(F))
    if len(p) == 1:
        return 0
    seq = sturm_sequence(p)
    lo, hi = interval.lo, interval.hi
    if interval.is_point:
        return 1 if ip.sign_at(p, lo) == 0 else 0
    v_lo = _variations(seq, "-inf" if lo is None else lo)
    v_hi = _variations(seq, "+inf" if hi is None else hi)
    # V(a) - V(b) counts roots in (a, b] for squarefree p.
    count = v_lo - v_hi
    hi_root = hi is not None and ip.sign_at(p, hi) == 0
    lo_root = lo is not None and ip.sign_at(p, lo) == 0
    if hi_root and interval.kind == OPEN:
        count -= 1
    if lo_root and interval.kind == CLOSED:
        count += 1
    return count


# ---------------------------------------------------------------------------
# isolation, refinement, interval evaluation
# ---------------------------------------------------------------------------


def isolate_roots(F):
    """All distinct real roots of F as disjoint sorted isolating intervals."""
    poly = F if isinstance(F, UniPoly) else UniPoly.from_ints(F)
    p = _int_poly(F)
    if len(p) == 1:
        return RootList(poly, (), (), ())
    entries = []
    for factor, mult in ip.yun(p):
        for iv in _isolate_squarefree(factor):
            entries.append([iv, mult, factor])
    entries.sort(key=lambda t: (t[0].lo, t[0].hi))
    # Intervals of different squarefree factors may overlap; refine until not.
    refiners = {}
    changed = True
    while changed:
        changed = False
        for i in range(len(entries) - 1):
            a, b = entries[i], entries[i + 1]
            if not a[0].disjoint(b[0]):
                for t in (a, b):
                    if not t[0].is_point:
                        r = refiners.setdefault(id(t[2]), _Refiner(t[2]))
                        t[0] = r.bisect(t[0], t[0].width / 2)
                changed = True
        entries.sort(key=lambda t: (t[0].lo, t[0].hi))
    return RootList(
        poly,
        tuple(t[0] for t in entries),
        tuple(t[1] for t in entries),
        tuple(tuple(t[2]) for t in entries),
    )


def _count_open(p, lo, hi):
    # Roots of squarefree p in the open interval (lo, hi), via Descartes after
    # mapping (lo, hi) onto (0, 1).
    den = lo.denominator * hi.denominator
    a = lo.numerator * hi.denominator
    w = hi.numerator * lo.denominator - a
    n = len(p) - 1
    lin = [a, w]
    q = []
    pw = 1
    for i in range(n, -1, -1):
        q = ip.add(ip.mul(q, lin), [p[i] * pw]) if i < n else [p[n]]
        pw *= den
    # Roots at the endpoints are excluded: divide them out (q is squarefree).
    if q[0] == 0:
        q = q[1:]
    if sum(q) == 0:
        q, _ = ip.exact_quotient(q, [-1, 1])
    roots = kernels.descartes_unit(ip.primitive(q)) if len(q) > 1 else []
    return len(roots)


def refine(F, interval, width):
    """Shrink an isolating interval of F to width at most ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise DomainError("width must be positive")
    p = ip.squarefree(_int_poly(F))
    if interval.lo is None or interval.hi is None:
        raise CertificationError("isolating interval must be bounded")
    r = _Refiner(p)
    if interval.is_point:
        if r.sign(interval.lo) != 0:
            raise CertificationError(f"{interval.lo} is not a root")
        return interval
    lo, hi = interval.lo, interval.hi
    inner = _count_open(p, lo, hi)
    lo_root = r.sign(lo) == 0 and interval.kind == CLOSED
    hi_root = r.sign(hi) == 0 and interval.kind in (CLOSED, HALF_OPEN)
    total = inner + lo_root + hi_root
    if total != 1:
        raise CertificationError(f"interval {interval} holds {total} roots, not one")
    if lo_root:
        return RatInterval.point(lo)
    if hi_root:
        return RatInterval.point(hi)
    if r.sign(lo) == 0 or r.sign(hi) == 0:
        # A root sits on an excluded endpoint; step inside before bisecting.
        lo, hi = _shrink_off_roots(r, lo, hi)
    out = r.bisect(RatInterval(lo, hi, OPEN), width)
    return out


def _shrink_off_roots(r, lo, hi):
    # The open interval holds exactly one root; move endpoints inward to
    # nonroots while keeping that root inside (detected by sign change).
    n = 2
    while True:
        step = (hi - lo) / (1 << n)
        a = lo + step if r.sign(lo) == 0 else lo
        b = hi - step if r.sign(hi) == 0 else hi
        sa, sb = r.sign(a), r.sign(b)
        if sa != 0 and sb != 0 and sa != sb:
            return a, b
        n += 1
        if n > 200:
            raise CertificationError("could not separate root from endpoint")


def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def interval_eval(F, interval):
    """Closed enclosure of {F(t) : t in interval} by interval Horner."""
    if interval.lo is None or interval.hi is None:
        raise DomainError("interval_eval needs a bounded interval")
    if not F.is_rational():
        raise DomainError("interval_eval needs rational coefficients")
    cs = F.coeffs
    if not cs:
        return RatInterval.point(0)
    x = (interval.lo, interval.hi)
    if x[0] == x[1]:
        return RatInterval.point(F(x[0]))
    r = (cs[-1], cs[-1])
    for c in reversed(cs[:-1]):
        r = _imul(r, x)
        r = (r[0] + c, r[1] + c)
    return RatInterval(r[0], r[1], CLOSED)


def interval_eval_pair(cs, lo, hi):
    """Fast path of interval_eval on a coefficient tuple; returns (lo, hi)."""
    if lo == hi:
        v = Fraction(0)
        for c in reversed(cs):
            v = v * lo + c
        return (v, v)
    x = (lo, hi)
    r = (cs[-1], cs[-1])
    for c in reversed(cs[:-1]):
        r = _imul(r, x)
        r = (r[0] + c, r[1] + c)
    return r
