"""The two monopoly maps, their iterates, cycle and multiplier polynomials.

Model 1: x -> x + f(e - x^3), e, f > 0.
Model 2: x -> x + K(a - 2bx + 3cx^2 - 4dx^3), a, b, c, d, K > 0.

Iterates are built over the integers: with F = (alpha_0 + ... + alpha_3 x^3)/D,
F^n = N_n / M_n where N_{n+1} = sum alpha_i N_n^i M_n^(3-i) and
M_{n+1} = D M_n^3 (common content divided out at every step).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import _intpoly as ip
from .errors import DegeneracyError, DivisibilityError, DomainError
from .exactalg import ParamPoly, UniPoly, compose, derivative, exact_div, symbols
from .semialg import GT, SemiSystem

MODEL1 = "model1"
MODEL2 = "model2"

PARAM_NAMES = {MODEL1: ("e", "f"), MODEL2: ("a", "b", "c", "d", "K")}

# The decimal parameters 3.6, 2.4, 0.6, 0.05 taken as exact rationals.
STANDARD = {"a": Fraction(18, 5), "b": Fraction(12, 5), "c": Fraction(3, 5), "d": Fraction(1, 20)}


def _model_tag(model):
    if model in (1, "1", MODEL1, "Model1"):
        return MODEL1
    if model in (2, "2", MODEL2, "Model2"):
        return MODEL2
    raise DomainError(f"unknown model {model!r}")


@dataclass(frozen=True)
class IterMap:
    model: str
    params: dict = field(hash=False)
    update: UniPoly = field(hash=False, repr=False)

    @property
    def key(self):
        return (self.model,) + tuple(self.params[n] for n in PARAM_NAMES[self.model])

    def int_update(self):
        """(alpha, D): integer numerator coefficients and positive denominator of F."""
        return _int_form(self.update.coeffs)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, IterMap) and self.key == other.key

    def label(self):
        return ", ".join(f"{n}={self.params[n]}" for n in PARAM_NAMES[self.model])


def _int_form(coeffs):
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    alpha = [int(c * den) for c in coeffs]
    alpha += [0] * (4 - len(alpha))
    return tuple(alpha), den


def symbolic_update(model):
    """F(x) with ParamPoly coefficients."""
    model = _model_tag(model)
    x = UniPoly.x()
    if model == MODEL1:
        e, f = symbols("e f")
        return x + f * (e - x**3)
    a, b, c, d, K = symbols("a b c d K")
    return x + K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)


def build_map(model, params=None, **kw):
    """IterMap for the given model and strictly positive rational parameters."""
    model = _model_tag(model)
    values = dict(params or {})
    values.update(kw)
    names = PARAM_NAMES[model]
    unknown = set(values) - set(names)
    if unknown:
        raise DomainError(f"unknown parameter(s) for {model}: {', '.join(sorted(unknown))}")
    missing = [n for n in names if n not in values]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join(missing)}")
    exact = {}
    for n in names:
        v = values[n]
        if isinstance(v, float):
            raise DomainError(f"parameter {n} must be rational, not float")
        v = Fraction(v)
        if v <= 0:
            raise DomainError(f"parameter {n} must be positive, got {v}")
        exact[n] = v
    update = symbolic_update(model).subs(exact)
    return IterMap(model, exact, update)


def model1(e, f):
    return build_map(MODEL1, e=e, f=f)


def model2(K, a=None, b=None, c=None, d=None):
    """Model 2 map; omitted a, b, c, d take the standard values."""
    p = dict(STANDARD)
    for name, v in (("a", a), ("b", b), ("c", c), ("d", d)):
        if v is not None:
            p[name] = v
    return build_map(MODEL2, K=K, **p)


def model1_from_economic(a, b, c, K):
    """Model 1 in (e, f) from price/cost parameters: e=(a-c)/(4b), f=4bK."""
    a, b, c, K = (Fraction(v) for v in (a, b, c, K))
    if a <= c:
        raise DomainError("price must exceed marginal cost (a > c)")
    return model1((a - c) / (4 * b), 4 * b * K)


# ---------------------------------------------------------------------------
# iterates and cycle polynomials (integer fast path)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _iterates(alpha, D, n):
    # [(N_k, M_k)] for k = 0..n.
    if n == 0:
        return (((0, 1), 1),)
    prev = _iterates(alpha, D, n - 1)
    N, M = prev[-1]
    N = list(N)
    N2 = ip.mul(N, N)
    N3 = ip.mul(N2, N)
    t = ip.add(
        ip.add(ip.scale(N3, alpha[3]), ip.scale(N2, alpha[2] * M)),
        ip.add(ip.scale(N, alpha[1] * M * M), [alpha[0] * M**3] if alpha[0] else []),
    )
    M2 = D * M**3
    g = gcd(ip.content(t), M2)
    return prev + ((tuple(c // g for c in t), M2 // g),)


def _power_int(m, n):
    alpha, D = m.int_update()
    return _iterates(alpha, D, n)[n]


def power(m, n):
    """F^n exactly (F^0 is x)."""
    if n < 0:
        raise DomainError("iterate order must be non-negative")
    N, M = _power_int(m, n)
    return UniPoly([Fraction(c, M) for c in N])


@lru_cache(maxsize=128)
def _cycle_int(alpha, D, n):
    N, M = _iterates(alpha, D, n)[n]
    p = list(N)
    while len(p) < 2:
        p.append(0)
    p[1] -= M
    p = ip.primitive(p)
    if not p:
        raise DegeneracyError(f"F^{n}(x) - x vanishes identically")
    for k in range(1, n):
        if n % k == 0:
            ck = _cycle_int(alpha, D, k)
            if not ck:
                raise DegeneracyError(f"cycle polynomial of order {k} is zero")
            try:
                p = ip.primitive(ip.exact_quotient(p, list(ck))[0])
            except ArithmeticError:
                raise DivisibilityError(
                    f"order-{k} cycle factor does not divide F^{n}(x) - x"
                ) from None
    return tuple(p)


def cycle_poly_ints(m, n):
    """Primitive integer coefficients of the order-n cycle polynomial C_n."""
    if n < 1:
        raise DomainError("cycle order must be positive")
    alpha, D = m.int_update()
    return list(_cycle_int(alpha, D, n))


def cycle_poly(m, n):
    """C_n = (F^n(x) - x) / prod_{k | n, k < n} C_k, content-normalized to integers."""
    p = UniPoly.from_ints(cycle_poly_ints(m, n))
    p._int = list(cycle_poly_ints(m, n))
    return p


def cycle_degree(n):
    """Degree of C_n for a cubic map: sum over k | n of mobius(n/k) 3^k."""
    total = 0
    for k in range(1, n + 1):
        if n % k == 0:
            total += _mobius(n // k) * 3**k
    return total


def _mobius(n):
    r = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            r = -r
        p += 1
    if n > 1:
        r = -r
    return r


def multiplier_poly(m, n):
    """(F^n)'(x); at a period-n point this is the orbit multiplier."""
    if n < 1:
        raise DomainError("order must be positive")
    return derivative(power(m, n))


def chain_multiplier(m, n, x):
    """prod_{k<n} F'(F^k(x)) evaluated at a rational x."""
    dF = derivative(m.update)
    r = Fraction(1)
    y = Fraction(x)
    for _ in range(n):
        r *= dF(y)
        y = m.update(y)
    return r


def symbolic_cycle_poly(model, n):
    """C_n with ParamPoly coefficients (practical for F^n of degree <= 9)."""
    if n > 2:
        raise DomainError("symbolic cycle polynomials are limited to n <= 2")
    F = symbolic_update(model)
    x = UniPoly.x()
    C1 = F - x
    if n == 1:
        return C1
    return exact_div(compose(F, F) - x, C1)


# ---------------------------------------------------------------------------
# stability systems and condition polynomials
# ---------------------------------------------------------------------------


def stability_system(model):
    """Parametric system whose real solutions are the stable positive equilibria.

    Model 1: x^3 - e = 0, 2 - 3fx^2 > 0, x > 0.
    Model 2: P = 0, -K(-2b+6cx-12dx^2) > 0, 2 + K(-2b+6cx-12dx^2) > 0, x > 0.
    """
    model = _model_tag(model)
    x = UniPoly.x()
    if model == MODEL1:
        e, f = symbols("e f")
        return SemiSystem(x**3 - e, ((2 - 3 * f * x**2, GT),), True)
    a, b, c, d, K = symbols("a b c d K")
    P = K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
    G = K * (-2 * b + 6 * c * x - 12 * d * x**2)
    return SemiSystem(P, ((-G, GT), (2 + G, GT)), True)


@dataclass(frozen=True)
class StabilityConditionSet:
    R1: ParamPoly
    R2: ParamPoly
    R3: ParamPoly
    R4: ParamPoly
    R5: ParamPoly
    R6: ParamPoly

    def as_dict(self):
        return {f"R{i}": getattr(self, f"R{i}") for i in range(1, 7)}

    def signs(self, values):
        return {k: p.sign_at(values) for k, p in self.as_dict().items()}

    def stable_equilibria(self, values):
        """Stable-equilibrium count predicted by the sign conditions (0, 1 or 2)."""
        s = self.signs(values)
        if (s["R1"] < 0 and s["R2"] > 0) or (s["R1"] > 0 and s["R2"] < 0):
            return 1
        if s["R1"] < 0 and s["R2"] < 0 and s["R3"] > 0 and s["R4"] < 0:
            return 2
        return 0


def printed_condition_polys():
    """R1..R6 transcribed as printed (R4's 'd^t2' read as d^2)."""
    a, b, c, d, K = symbols("a b c d K")
    R1 = 108 * a**2 * d**2 - 108 * a * b * c * d + 27 * a * c**3 + 32 * b**3 * d - 9 * b**2 * c**2
    R2 = (108 * K**3 * a**2 * d**2 - 108 * K**3 * a * b * c * d + 27 * K**3 * a * c**3
          + 32 * K**3 * b**3 * d - 9 * K**3 * b**2 * c**2 - 24 * K * b * d + 9 * K * c**2 - 8 * d)
    R3 = 8 * K * b * d - 3 * K * c**2 + 8 * d
    R4 = (432 * K**2 * a**2 * d**3 - 432 * K**2 * a * b * c * d**2 + 108 * K**2 * a * c**3 * d
          + 128 * K**2 * b**3 * d**2 - 36 * K**2 * b**2 * c**2 * d + 192 * K * b**2 * d**2
          - 144 * K * b * c**2 * d + 27 * K * c**4 + 64 * b * d**2 - 24 * c**2 * d)
    R5 = (6 * a * d * K - b * c * K + c) * (8 * K * b * d - 3 * K * c**2 + 4 * d)
    R6 = 48 * a * b * d**2 - 18 * a * c**2 * d - 8 * b**2 * c * d + 3 * b * c**3
    return StabilityConditionSet(R1, R2, R3, R4, R5, R6)


def regenerate_R1_R2():
    """R1, R2 recomputed from the discriminant and resultant of the stability system."""
    from .exactalg import discriminant, resultant

    a, b, c, d, K = symbols("a b c d K")
    x = UniPoly.x()
    P = K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
    G = K * (-2 * b + 6 * c * x - 12 * d * x**2)
    R1 = ParamPoly.coerce(discriminant(P)) / (-16 * K**5 * d)
    R2 = ParamPoly.coerce(resultant(P, 2 + G)) / (-16 * K**2 * d)
    return R1, R2


def model2_condition_polys():
    """R1..R6; R1 and R2 are regenerated and checked against the printed forms."""
    printed = printed_condition_polys()
    R1, R2 = regenerate_R1_R2()
    if not (R1.equal_up_to_constant(printed.R1) and R2.equal_up_to_constant(printed.R2)):
        raise AssertionError("regenerated R1/R2 disagree with the printed polynomials")
    if printed.R5 != _R5_expanded():
        raise AssertionError("factored and expanded R5 disagree")
    return StabilityConditionSet(R1, R2, printed.R3, printed.R4, printed.R5, printed.R6)


def _R5_expanded():
    a, b, c, d, K = symbols("a b c d K")
    return (48 * K**2 * a * b * d**2 - 18 * K**2 * a * c**2 * d - 8 * K**2 * b**2 * c * d
            + 3 * K**2 * b * c**3 + 24 * K * a * d**2 + 4 * K * b * c * d - 3 * K * c**3 + 4 * c * d)


def model2_equilibrium_poly():
    """K(a - 2bx + 3cx^2 - 4dx^3) with ParamPoly coefficients."""
    a, b, c, d, K = symbols("a b c d K")
    x = UniPoly.x()
    return K * (a - 2 * b * x + 3 * c * x**2 - 4 * d * x**3)
