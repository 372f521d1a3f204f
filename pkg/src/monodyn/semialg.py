"""Real-solution counting for univariate semi-algebraic systems.

A system is {P(x) = 0, Q_i(x) > 0 or Q_i(x) != 0, optionally x > 0}. At a
rational parameter point the number of distinct real solutions is found by
isolating the constraint roots, sampling each Q_i's sign on the open
intervals between them, and Sturm-counting P on the qualifying intervals.
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import _intpoly as ip
from .errors import DegenerateProbeError, DomainError
from .exactalg import ParamPoly, UniPoly, discriminant, resultant
from .realroots import CLOSED, OPEN, RatInterval, _isolate_squarefree, _Refiner, sturm_count

GT = ">0"
NE = "!=0"


@dataclass(frozen=True)
class SemiSystem:
    equation: UniPoly
    constraints: tuple = ()  # (UniPoly, GT | NE) pairs
    positivity: bool = False

    def __post_init__(self):
        cons = tuple((q, rel) for q, rel in self.constraints)
        for q, rel in cons:
            if rel not in (GT, NE):
                raise DomainError(f"unsupported relation {rel!r}; encode <0 by negation")
            if q.var != self.equation.var:
                raise DomainError("constraint uses a different main variable")
        object.__setattr__(self, "constraints", cons)

    def all_constraints(self):
        """Constraint list with x > 0 appended when ``positivity`` is set."""
        cons = list(self.constraints)
        if self.positivity:
            cons.append((UniPoly.x(self.equation.var), GT))
        return cons

    def subs(self, values):
        return SemiSystem(
            self.equation.subs(values),
            tuple((q.subs(values), rel) for q, rel in self.constraints),
            self.positivity,
        )


def _signed_ints(F):
    # Integer coefficients with the same sign as F (content removed).
    if not F.is_rational():
        raise DomainError("parameters must be substituted before counting")
    den = 1
    for c in F.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    a = [int(c * den) for c in F.coeffs]
    g = ip.content(a)
    return [c // g for c in a] if g else []


def _satisfied(q, rel, x):
    s = ip.sign_at(q, x)
    return s > 0 if rel == GT else s != 0


def count_solutions(S):
    """Number of distinct real x satisfying the system (all coefficients rational)."""
    P = _signed_ints(S.equation)
    if not P:
        raise DomainError("zero equation polynomial")
    P = ip.squarefree(P)
    cons = []
    for Q, rel in S.all_constraints():
        q = _signed_ints(Q)
        if not q:
            # The zero polynomial is never > 0 and never != 0.
            return 0
        if len(q) > 1:
            g = ip.gcd_poly(P, q)
            if len(g) > 1:
                # Common roots make Q vanish, violating either relation.
                P = ip.primitive(ip.exact_quotient(P, g)[0])
        cons.append((q, rel))
    if len(P) == 1:
        return 0
    # Isolating intervals for the constraint roots, one owner factor each.
    # Constraints may share roots, so isolate the roots of one squarefree
    # product; its isolating intervals are disjoint by construction.
    prod = [1]
    for q, _ in cons:
        if len(q) > 1:
            prod = ip.mul(prod, ip.squarefree(q))
    walls = []
    if len(prod) > 1:
        L = ip.squarefree(ip.primitive(prod))
        ref = _Refiner(L)
        walls = [[iv, ref] for iv in _isolate_squarefree(L)]
    walls = _separate(walls, P)
    # Complementary open intervals, sampled at rational points.
    cuts = [(w.lo, w.hi) for w, _ in walls]
    pieces = []
    if not cuts:
        pieces.append((None, None, Fraction(0)))
    else:
        pieces.append((None, cuts[0][0], cuts[0][0] - 1))
        for (a_lo, a_hi), (b_lo, b_hi) in zip(cuts, cuts[1:]):
            pieces.append((a_hi, b_lo, (a_hi + b_lo) / 2))
        pieces.append((cuts[-1][1], None, cuts[-1][1] + 1))
    total = 0
    for lo, hi, sample in pieces:
        if lo is not None and hi is not None and lo >= hi:
            continue
        if all(_satisfied(q, rel, sample) for q, rel in cons):
            total += sturm_count(P, RatInterval(lo, hi, OPEN))
    return total


def _separate(walls, P):
    # Shrink the disjoint constraint-root intervals until, taken closed, they
    # hold no root of P (P shares no root with any constraint here).
    out = []
    for iv, ref in walls:
        while not iv.is_point and sturm_count(P, RatInterval(iv.lo, iv.hi, CLOSED)) > 0:
            iv = ref.bisect(iv, iv.width / 2)
        out.append((iv, ref))
    return out


def count_solutions_direct(S):
    """Independent count: isolate P's roots and certify each constraint's sign.

    Each isolating interval of P is refined until interval evaluation of
    every Q_i excludes zero, then the constraints are checked there. Used
    as a cross-check of :func:`count_solutions`.
    """
    from .realroots import interval_eval, isolate_roots

    P = S.equation
    if P.is_zero():
        raise DomainError("zero equation polynomial")
    roots = isolate_roots(P)
    cons = S.all_constraints()
    total = 0
    for iv, factor in zip(roots.intervals, roots.factors):
        ref = _Refiner(list(factor))
        ok = True
        for Q, rel in cons:
            if Q.is_zero() or _vanishes_at_root(Q, factor, iv):
                ok = False
                break
            enc = interval_eval(Q, RatInterval(iv.lo, iv.hi, CLOSED))
            while enc.lo <= 0 <= enc.hi:
                iv = ref.bisect(iv, iv.width / 2)
                enc = interval_eval(Q, RatInterval(iv.lo, iv.hi, CLOSED))
            if rel == GT and enc.hi < 0:
                ok = False
                break
        total += ok
    return total


def _vanishes_at_root(Q, factor, iv):
    # Q is zero at the root isolated by iv iff gcd(Q, factor) has a root there.
    if Q.degree < 1:
        return False
    g = ip.gcd_poly(Q.int_primitive(), list(factor))
    if len(g) == 1:
        return False
    kind = CLOSED if iv.is_point else OPEN
    return sturm_count(UniPoly.from_ints(g), RatInterval(iv.lo, iv.hi, kind)) > 0


# ---------------------------------------------------------------------------
# border polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BorderPoly:
    factors: tuple  # (ParamPoly, tag) pairs

    def product(self):
        r = ParamPoly.const(1)
        for p, _ in self.factors:
            r = r * p
        return r

    def vanishing_factors(self, values):
        """Tags of factors that evaluate to zero at a parameter point."""
        return [tag for p, tag in self.factors if p.evaluate(values) == 0]


def border_polynomial(S):
    """Leading coefficient, discriminant and constraint resultants of S."""
    P = S.equation
    if P.degree < 1:
        raise DomainError("equation must have positive degree in the main variable")
    factors = [
        (ParamPoly.coerce(P.lc), "leading-coefficient"),
        (ParamPoly.coerce(discriminant(P)), "discriminant"),
    ]
    for i, (Q, _) in enumerate(S.all_constraints()):
        factors.append((ParamPoly.coerce(resultant(P, Q)), f"resultant-{i}"))
    return BorderPoly(tuple(factors))


# ---------------------------------------------------------------------------
# probe reports
# ---------------------------------------------------------------------------


@dataclass
class ProbeResult:
    params: dict
    count: int
    signs: dict = field(default_factory=dict)


def _sign_char(s):
    return "+" if s > 0 else ("-" if s < 0 else "0")


def sign_conditions_report(S, probes, tracked, border=None):
    """Solution counts and tracked-polynomial signs at each probe.

    ``tracked`` maps names to ParamPolys. A probe on a zero of the border
    polynomial raises DegenerateProbeError.
    """
    if border is None:
        border = border_polynomial(S)
    rows = []
    for probe in probes:
        values = {k: Fraction(v) for k, v in probe.items()}
        bad = border.vanishing_factors(values)
        if bad:
            raise DegenerateProbeError(f"probe {probe} annihilates border factor(s) {', '.join(bad)}")
        count = count_solutions(S.subs(values))
        signs = {name: p.sign_at(values) for name, p in tracked.items()}
        rows.append(ProbeResult(values, count, signs))
    return rows


def report_csv(rows, names=None):
    """CSV text: probe parameters, count, one sign column per tracked polynomial."""
    if not rows:
        return ""
    params = list(rows[0].params)
    names = names or list(rows[0].signs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(params + ["count"] + names)
    for r in rows:
        w.writerow([str(r.params[p]) for p in params] + [r.count] + [_sign_char(r.signs[n]) for n in names])
    return buf.getvalue()
