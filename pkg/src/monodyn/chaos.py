"""Li-Yorke chaos certificates.

Two routes: a certified 3-cycle (period three implies chaos), and a
snapback repeller for Model 1 in the one-dimensional Marotto form: a
repelling equilibrium x* together with a point y != x* in a repelling
interval around x* such that F^m(y) = x* and (F^m)'(y) != 0.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import _intpoly as ip
from ._fmt import decimal_str
from .errors import CertificationError, DegeneracyError, DomainError
from .exactalg import ParamPoly, UniPoly, derivative, resultant
from .models import MODEL1, power
from .oracles import _as_uni
from .orbits import enumerate_cycles
from .realroots import CLOSED, RatInterval, _isolate_squarefree, _Refiner, interval_eval_pair
from .semialg import GT, NE, SemiSystem, count_solutions

PERIOD3 = "period3"
SNAPBACK = "snapback"
UNDETERMINED = "undetermined"

_MAX_ROUNDS = 200


@dataclass(frozen=True)
class Condition:
    """A certified strict inequality ``expr rel 0`` with its enclosure."""

    text: str
    relation: str  # ">0", "<0" or "!=0"
    enclosure: RatInterval

    def holds(self):
        lo, hi = self.enclosure.lo, self.enclosure.hi
        if self.relation == ">0":
            return lo > 0
        if self.relation == "<0":
            return hi < 0
        return lo > 0 or hi < 0


@dataclass
class ChaosCertificate:
    method: str
    witness: object
    verified_conditions: list = field(default_factory=list)
    label: str = ""

    def report(self, places=12):
        """Structured text: one verified inequality per line with its enclosure."""
        lines = [f"certificate method={self.method} map=({self.label})"]
        if self.method == PERIOD3:
            pts = ", ".join(decimal_str(v, places) for v in self.witness.midpoints())
            lines.append(f"witness 3-cycle: {pts}")
        else:
            xs, ys, m = self.witness
            lines.append(f"witness equilibrium in {xs}; preimage y in {ys}; m={m}")
        for c in self.verified_conditions:
            enc = c.enclosure
            lines.append(
                f"  {c.text} {c.relation}: [{decimal_str(enc.lo, places)}, {decimal_str(enc.hi, places)}]"
            )
        return "\n".join(lines)


def _certify_sign(expr_cs, iv, ref, relation):
    """Refine iv (on ref's polynomial) until expr's enclosure is strictly signed.

    The enclosure must also sit away from 0 by at least its own width.
    Returns (enclosure, refined interval) or (None, iv) when the sign
    cannot be certified within the refinement budget.
    """
    for _ in range(_MAX_ROUNDS):
        lo, hi = interval_eval_pair(expr_cs, iv.lo, iv.hi)
        w = hi - lo
        if (lo > 0 and lo >= w) or (hi < 0 and -hi >= w):
            ok = lo > 0 if relation == ">0" else (hi < 0 if relation == "<0" else True)
            return (RatInterval(lo, hi, CLOSED) if ok else None), iv
        if iv.is_point:
            break
        iv = ref.bisect(iv, iv.width / 2)
    return None, iv


# ---------------------------------------------------------------------------
# period three
# ---------------------------------------------------------------------------


def certify_period3(m):
    """Certificate carrying a 3-cycle witness, or None when no 3-cycle exists."""
    orbits = enumerate_cycles(m, 3)
    if not orbits:
        return None
    orb = orbits[0]
    conds = []
    for i, p in enumerate(orb.points):
        conds.append(Condition(f"p{i}", ">0", RatInterval(p.lo, p.hi, CLOSED)))
    pts = sorted(orb.points, key=lambda v: v.lo)
    for a, b in zip(pts, pts[1:]):
        conds.append(Condition("gap between consecutive points", ">0", RatInterval(b.lo - a.hi, b.hi - a.lo, CLOSED)))
    cert = ChaosCertificate(PERIOD3, orb, conds, m.label())
    if not all(c.holds() for c in conds):
        raise CertificationError("3-cycle witness conditions did not certify")
    return cert


# ---------------------------------------------------------------------------
# snapback repeller (Model 1)
# ---------------------------------------------------------------------------


def snapback_polynomial(m, steps=2):
    """P(y) = res_x(x^3 - e, F^steps(y) - x); its real roots satisfy F^steps(y) = x*."""
    if m.model != MODEL1:
        raise DomainError("snapback certification is implemented for Model 1")
    e = m.params["e"]
    Fm = power(m, steps)
    y = ParamPoly.var("y")
    Fy = ParamPoly()
    for i, c in enumerate(Fm.coeffs):
        Fy = Fy + c * y**i
    eq = UniPoly([-e, 0, 0, 1], "x")
    lin = UniPoly([Fy, -1], "x")
    r = ParamPoly.coerce(resultant(eq, lin))
    if r.is_zero():
        raise DegeneracyError("elimination resultant vanished identically")
    return _as_uni(r, "y")


def snapback_system(m, steps=2):
    """Semi-algebraic system in y whose solutions are snapback witnesses."""
    e = m.params["e"]
    P = snapback_polynomial(m, steps)
    yv = UniPoly.x("y")
    F = UniPoly(m.update.coeffs, "y")
    dF = derivative(F)
    cons = [(dF * dF - 1, GT), (yv**3 - e, NE)]
    G = yv
    for _ in range(1, steps):
        G = _compose(F, G)
        cons.append((_compose(dF, G), NE))
    return SemiSystem(P, tuple(cons), positivity=True)


def _compose(F, G):
    r = UniPoly([], G.var)
    for c in reversed(F.coeffs):
        r = r * G + c
    return r


def snapback_status(m, steps=2):
    """"certified", "none" or "undetermined" (on the boundary of the region)."""
    cert = certify_snapback(m, steps)
    if cert == UNDETERMINED:
        return UNDETERMINED
    return "certified" if cert is not None else "none"


def certify_snapback(m, steps=2, allow_large=False):
    """Snapback-repeller certificate for Model 1, None, or UNDETERMINED.

    UNDETERMINED is returned when the equilibrium is exactly nonhyperbolic
    (|F'(x*)| = 1), or when no witness exists but a positive root of P
    lies exactly on a constraint boundary. Both happen only on the edge
    of the parameter region.
    """
    if m.model != MODEL1:
        raise DomainError("snapback certification is implemented for Model 1")
    if steps < 2:
        raise DomainError("m must be at least 2")
    if steps > 2 and not allow_large:
        raise DomainError("m > 2 is disabled by default (pass allow_large=True)")
    e, f = m.params["e"], m.params["f"]
    F = m.update.coeffs
    dF = derivative(m.update)
    rep = (dF * dF - 1).coeffs
    # Condition 1: x* repelling. Isolate x* as the real root of x^3 - e.
    eqp = ip.primitive([-e.numerator, 0, 0, e.denominator])
    xs = _isolate_squarefree(eqp)[0]
    xref = _Refiner(eqp)
    # (F'(x*))^2 - 1 = 0 exactly when 27 e^2 f^3 = 8.
    if 27 * e * e * f**3 == 8:
        return UNDETERMINED
    enc, xs = _certify_sign(rep, xs, xref, ">0")
    if enc is None:
        return None
    conds = [Condition("(F'(x*))^2 - 1", ">0", enc)]
    S = snapback_system(m, steps)
    P = S.equation.int_primitive()
    if count_solutions(S) < 1:
        # A positive candidate y lying exactly on a constraint boundary means
        # the parameter sits on the region's edge. P always vanishes at
        # y = x*, which the y^3 != e constraint removes, so skip that one.
        for i, (Q, _) in enumerate(S.constraints):
            if i == 1:
                continue
            g = ip.gcd_poly(list(P), Q.int_primitive())
            if len(g) > 1 and any(iv.hi is None or iv.hi > 0 for iv in _isolate_squarefree(ip.squarefree(g))):
                return UNDETERMINED
        return None
    # Witness: the smallest root of P satisfying every constraint.
    Psf = ip.squarefree(list(P))
    yref = _Refiner(Psf)
    for ys in _isolate_squarefree(Psf):
        if ys.hi is not None and ys.hi <= 0:
            continue
        found = _witness_conditions(S, ys, yref, xs, xref, F, steps)
        if found is not None:
            ys, xs, wc = found
            cert = ChaosCertificate(SNAPBACK, (xs, ys, steps), conds + wc, m.label())
            return cert
    raise CertificationError("count reported a witness but none certified")


def _witness_conditions(S, ys, yref, xs, xref, F, steps):
    conds = []
    enc, ys = _certify_sign((0, 1), ys, yref, ">0")
    if enc is None:
        return None
    conds.append(Condition("y", ">0", enc))
    for Q, rel in S.constraints:
        r = ">0" if rel == GT else "!=0"
        enc, ys = _certify_sign(Q.coeffs, ys, yref, r)
        if enc is None:
            return None
        conds.append(Condition(_describe(Q, rel, S), r, enc))
    # y != x*: disjoint enclosures.
    for _ in range(_MAX_ROUNDS):
        gap_lo = max(ys.lo - xs.hi, xs.lo - ys.hi)
        if gap_lo > 0:
            break
        ys = yref.bisect(ys, ys.width / 2) if not ys.is_point else ys
        xs = xref.bisect(xs, xs.width / 2) if not xs.is_point else xs
    else:
        return None
    conds.append(Condition("|y - x*|", ">0", RatInterval(gap_lo, max(ys.hi - xs.lo, xs.hi - ys.lo), CLOSED)))
    return ys, xs, conds


def _describe(Q, rel, S):
    idx = [q for q, _ in S.constraints].index(Q)
    if idx == 0:
        return "(F'(y))^2 - 1"
    if idx == 1:
        return "y^3 - e"
    return f"F'(F^{idx - 1}(y))"


def verify_snapback_witness(m, cert, width=Fraction(1, 10**12)):
    """Recheck a snapback certificate by direct interval iteration.

    Refines y and x* and confirms the interval image F^m(y) lies within
    the equilibrium's isolating interval widened by ``width``, and that
    F' stays outside [-1, 1] on the hull of x* and y.
    """
    xs, ys, steps = cert.witness
    S = snapback_system(m, steps)
    yref = _Refiner(ip.squarefree(S.equation.int_primitive()))
    e = m.params["e"]
    xref = _Refiner(ip.primitive([-e.numerator, 0, 0, e.denominator]))
    F = m.update.coeffs
    for _ in range(_MAX_ROUNDS):
        a, b = ys.lo, ys.hi
        for _ in range(steps):
            a, b = interval_eval_pair(F, a, b)
        if a >= xs.lo - width and b <= xs.hi + width:
            break
        if not ys.is_point:
            ys = yref.bisect(ys, ys.width / 2)
        if not xs.is_point and xs.width > width:
            xs = xref.bisect(xs, xs.width / 2)
    else:
        return False
    lo = min(xs.lo, ys.lo)
    hi = max(xs.hi, ys.hi)
    dF = derivative(m.update).coeffs
    dlo, dhi = interval_eval_pair(dF, lo, hi)
    return dhi < -1 or dlo > 1


__all__ = [
    "Condition",
    "ChaosCertificate",
    "PERIOD3",
    "SNAPBACK",
    "UNDETERMINED",
    "certify_period3",
    "certify_snapback",
    "snapback_polynomial",
    "snapback_system",
    "snapback_status",
    "verify_snapback_witness",
]
