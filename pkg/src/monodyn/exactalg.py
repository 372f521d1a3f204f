"""Exact polynomial algebra over the rationals.

``ParamPoly`` is a sparse multivariate polynomial in named parameters with
``Fraction`` coefficients. ``UniPoly`` is a dense polynomial in one main
variable whose coefficients are either all rational or all ``ParamPoly``.
Both are immutable.
"""

from fractions import Fraction
from math import gcd

from . import _intpoly as ip
from .errors import DivisibilityError, DomainError

Rational = Fraction

# Canonical parameter order; unknown names sort after these, alphabetically.
VAR_ORDER = ("e", "f", "a", "b", "c", "d", "K")


def _var_key(name):
    try:
        return (0, VAR_ORDER.index(name), "")
    except ValueError:
        return (1, 0, name)


def _is_scalar(v):
    return isinstance(v, (int, Fraction))


class ParamPoly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms=None, variables=()):
        variables = tuple(variables)
        if list(variables) != sorted(variables, key=_var_key) or len(set(variables)) != len(variables):
            raise DomainError("variables must be distinct and in canonical order")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise DomainError("exponent vector length does not match variables")
            if c:
                clean[exps] = Fraction(c)
        self.variables = variables
        self.terms = clean
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def var(cls, name):
        return cls({(1,): 1}, (name,))

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)} if c else {}, ())

    @staticmethod
    def coerce(v):
        if isinstance(v, ParamPoly):
            return v
        if _is_scalar(v):
            return ParamPoly.const(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to ParamPoly")

    def _extend(self, variables):
        if variables == self.variables:
            return self.terms
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for exps, c in self.terms.items():
            full = [0] * len(variables)
            for i, e in zip(idx, exps):
                full[i] = e
            out[tuple(full)] = c
        return out

    @staticmethod
    def _union(p, q):
        if p.variables == q.variables:
            return p.variables
        return tuple(sorted(set(p.variables) | set(q.variables), key=_var_key))

    def compact(self):
        """Drop variables that do not occur."""
        used = [i for i in range(len(self.variables)) if any(e[i] for e in self.terms)]
        if len(used) == len(self.variables):
            return self
        terms = {tuple(e[i] for i in used): c for e, c in self.terms.items()}
        return ParamPoly(terms, tuple(self.variables[i] for i in used))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            if not _is_scalar(other):
                return NotImplemented
            other = ParamPoly.const(other)
        vs = self._union(self, other)
        out = dict(self._extend(vs))
        for e, c in other._extend(vs).items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ParamPoly(out, vs).compact()

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        if not isinstance(other, ParamPoly) and not _is_scalar(other):
            return NotImplemented
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if not other:
                return ParamPoly()
            return ParamPoly({e: c * other for e, c in self.terms.items()}, self.variables)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        vs = self._union(self, other)
        a = self._extend(vs)
        b = other._extend(vs)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return ParamPoly(out, vs).compact()

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise DomainError("exponent must be a non-negative integer")
        r = ParamPoly.const(1)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def __truediv__(self, other):
        """Exact division; raises DivisibilityError on a nonzero remainder."""
        if _is_scalar(other):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, ParamPoly):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self * (1 / other.constant_value())
        vs = self._union(self, other)
        rem = dict(self._extend(vs))
        div = other._extend(vs)
        lt_e = max(div, key=_grlex)
        lt_c = div[lt_e]
        quot = {}
        while rem:
            e = max(rem, key=_grlex)
            shift = tuple(x - y for x, y in zip(e, lt_e))
            if min(shift) < 0:
                raise DivisibilityError("multivariate division leaves a remainder")
            q = rem[e] / lt_c
            quot[shift] = q
            for de, dc in div.items():
                t = tuple(x + y for x, y in zip(de, shift))
                s = rem.get(t, 0) - q * dc
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return ParamPoly(quot, vs).compact()

    def __rtruediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return ParamPoly.const(other) / self

    # -- predicates and accessors ------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if _is_scalar(other):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        a = self.compact()
        b = other.compact()
        return a.variables == b.variables and a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            a = self.compact()
            self._hash = hash((a.variables, frozenset(a.terms.items())))
        return self._hash

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name):
        if name not in self.variables:
            return 0 if self.terms else -1
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def leading_term(self):
        """(exponent dict, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return dict(zip(self.variables, e)), self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    # -- evaluation ---------------------------------------------------------

    def subs(self, values):
        """Substitute rational values for some variables; returns ParamPoly."""
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        fixed = [(i, Fraction(values[v])) for i, v in enumerate(self.variables) if v in values]
        out = {}
        for e, c in self.terms.items():
            for i, val in fixed:
                if e[i]:
                    c = c * val ** e[i]
            k = tuple(e[i] for i in keep)
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ParamPoly(out, tuple(self.variables[i] for i in keep))

    def evaluate(self, values):
        """Rational value at a point assigning every occurring variable."""
        r = self.subs(values)
        if not r.is_constant():
            missing = [v for v in r.compact().variables]
            raise DomainError(f"no value given for {', '.join(missing)}")
        return r.constant_value()

    def sign_at(self, values):
        v = self.evaluate(values)
        return (v > 0) - (v < 0)

    # -- normalization ------------------------------------------------------

    def content(self):
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def normalized(self):
        """Integer-coprime form whose lex-first monomial has positive coefficient."""
        if not self.terms:
            return self
        c = self.content()
        lead = max(self.terms)  # lexicographic on the exponent vector
        if self.terms[lead] < 0:
            c = -c
        return self * (1 / c)

    def equal_up_to_constant(self, other):
        other = ParamPoly.coerce(other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized()

    # -- display ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"ParamPoly({self})"


def _grlex(e):
    return (sum(e), e)


def symbols(names):
    """ParamPoly variables for a whitespace-separated list of names."""
    return tuple(ParamPoly.var(n) for n in names.split())


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


def _coerce_coeff(c):
    if isinstance(c, ParamPoly):
        c = c.compact()
        if c.is_constant():
            return c.constant_value()
        return c
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class UniPoly:
    """Dense univariate polynomial; coefficients lowest degree first."""

    __slots__ = ("coeffs", "var", "_int")

    def __init__(self, coeffs, var="x"):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self._int = None

    @classmethod
    def from_ints(cls, coeffs, var="x"):
        p = cls.__new__(cls)
        cs = ip.trim(coeffs)
        p.coeffs = tuple(Fraction(c) for c in cs)
        p.var = var
        p._int = None
        return p

    @classmethod
    def x(cls, var="x"):
        return cls([0, 1], var)

    @classmethod
    def constant(cls, c, var="x"):
        return cls([c], var)

    # -- basic properties ---------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def int_primitive(self):
        """Primitive integer coefficient list proportional to a rational poly."""
        if self._int is None:
            if not self.is_rational():
                raise DomainError("polynomial has parametric coefficients")
            self._int = ip.from_fractions(self.coeffs)
        return self._int

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        if _is_scalar(other) or isinstance(other, ParamPoly):
            return self.coeffs == UniPoly([other], self.var).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __call__(self, value):
        r = 0
        for c in reversed(self.coeffs):
            r = r * value + c
        return r

    def subs(self, values):
        """Substitute parameter values into ParamPoly coefficients."""
        return UniPoly(
            [c.subs(values) if isinstance(c, ParamPoly) else c for c in self.coeffs], self.var
        )

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, UniPoly):
            if other.var != self.var:
                raise DomainError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if _is_scalar(other) or isinstance(other, ParamPoly):
            return UniPoly([other], self.var)
        raise TypeError(f"cannot combine UniPoly with {type(other).__name__}")

    def __add__(self, other):
        return arith(self, self._lift(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, self._lift(other), "sub")

    def __rsub__(self, other):
        return arith(self._lift(other), self, "sub")

    def __mul__(self, other):
        return arith(self, self._lift(other), "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __pow__(self, k):
        r = UniPoly([1], self.var)
        for _ in range(k):
            r = r * self
        return r

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = f"({c})" if isinstance(c, ParamPoly) else str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UniPoly({self})"


def _rational_mul(a, b):
    # Clear denominators, multiply over Z (Kronecker), rescale.
    ia, da = _to_int_scaled(a)
    ib, db = _to_int_scaled(b)
    prod = ip.mul(ia, ib)
    den = da * db
    return [Fraction(c, den) for c in prod]


def _to_int_scaled(cs):
    den = 1
    for c in cs:
        q = c.denominator
        den = den * q // gcd(den, q)
    return [int(c * den) for c in cs], den


def arith(F, G, kind):
    """Exact add, sub or mul of two UniPolys sharing the main variable."""
    if not isinstance(F, UniPoly) or not isinstance(G, UniPoly):
        raise DomainError("arith expects UniPoly operands")
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    a, b = F.coeffs, G.coeffs
    if kind == "add" or kind == "sub":
        sign = 1 if kind == "add" else -1
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            x = a[i] if i < len(a) else 0
            y = b[i] if i < len(b) else 0
            out.append(x + sign * y)
        return UniPoly(out, F.var)
    if kind == "mul":
        if not a or not b:
            return UniPoly([], F.var)
        if F.is_rational() and G.is_rational() and min(len(a), len(b)) > 8:
            return UniPoly(_rational_mul(a, b), F.var)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UniPoly(out, F.var)
    raise DomainError(f"unknown arithmetic kind {kind!r}")


def derivative(F):
    return UniPoly([i * F.coeffs[i] for i in range(1, len(F.coeffs))], F.var)


def compose(F, G):
    """F(G(x)) exactly."""
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    r = UniPoly([], F.var)
    for c in reversed(F.coeffs):
        r = r * G + c
    return r


def divmod_poly(F, G):
    """Quotient and remainder over the coefficient field (exact divisions only)."""
    if G.is_zero():
        raise DomainError("division by the zero polynomial")
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    rem = list(F.coeffs)
    dg = G.degree
    lc = G.lc
    k = len(rem) - dg
    if k <= 0:
        return UniPoly([], F.var), F
    quot = [0] * k
    for i in range(k - 1, -1, -1):
        c = rem[i + dg]
        if c == 0:
            continue
        q = c / lc
        quot[i] = q
        for j in range(dg + 1):
            rem[i + j] = rem[i + j] - q * G.coeffs[j]
    return UniPoly(quot, F.var), UniPoly(rem[:dg], F.var)


def exact_div(F, G):
    """Return Q with Q*G = F; raises DivisibilityError otherwise."""
    if G.is_zero():
        raise DomainError("division by the zero polynomial")
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    if F.is_rational() and G.is_rational():
        a, da = _to_int_scaled(F.coeffs)
        b, db = _to_int_scaled(G.coeffs)
        try:
            q, s = ip.exact_quotient(a, b)
        except ArithmeticError as exc:
            raise DivisibilityError(str(exc)) from None
        # F = (a/da), G = (b/db), a = (q/s) b  =>  F = q*db/(s*da) * G
        scale = Fraction(db, s * da)
        return UniPoly([c * scale for c in q], F.var)
    try:
        q, r = divmod_poly(F, G)
    except DivisibilityError:
        raise DivisibilityError("quotient is not polynomial in the parameters") from None
    if not r.is_zero():
        raise DivisibilityError("nonzero remainder in exact division")
    return q


def _exact_quotient(v, d):
    if d == 1 or v == 0:
        return v
    if isinstance(d, ParamPoly) and not isinstance(v, ParamPoly):
        v = ParamPoly.coerce(v)
    return v / d


def _bareiss_det(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    m = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = _exact_quotient(v, prev)
            m[i][k] = 0
        prev = pivot
    d = m[n - 1][n - 1]
    return _coerce_coeff(-d if sign < 0 else d)


def sylvester_matrix(F, G):
    """Sylvester matrix with deg G rows of F on top, then deg F rows of G."""
    m, n = F.degree, G.degree
    size = m + n
    rows = []
    fc = list(reversed(F.coeffs))
    gc = list(reversed(G.coeffs))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def resultant(F, G):
    """Sylvester resultant res(F, G) (determinant with F's rows first)."""
    if F.is_zero() or G.is_zero():
        raise DomainError("resultant of a zero polynomial")
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    if F.degree == 0 and G.degree == 0:
        return Fraction(1)
    if G.degree == 0:
        return _coerce_coeff(G.lc ** F.degree)
    if F.degree == 0:
        return _coerce_coeff(F.lc ** G.degree)
    return _bareiss_det(sylvester_matrix(F, G))


def discriminant(F):
    """res(F, F') with no leading-coefficient normalization."""
    if F.degree < 1:
        raise DomainError("discriminant of a constant polynomial")
    return resultant(F, derivative(F))


def gcd_squarefree(F, G=None):
    """Monic gcd(F, G), or the integer-primitive squarefree part of F."""
    if G is None:
        if F.is_zero():
            raise DomainError("squarefree part of the zero polynomial")
        return UniPoly.from_ints(ip.squarefree(F.int_primitive()), F.var)
    if F.is_zero() and G.is_zero():
        raise DomainError("gcd of two zero polynomials")
    if F.var != G.var:
        raise DomainError(f"variable mismatch: {F.var} vs {G.var}")
    if F.is_zero():
        F, G = G, F
    g = ip.gcd_poly(F.int_primitive(), G.int_primitive() if not G.is_zero() else [])
    lc = g[-1]
    return UniPoly([Fraction(c, lc) for c in g], F.var)


def equal_up_to_constant(p, q):
    """True when p = c*q for a nonzero rational c (ParamPoly or UniPoly)."""
    if isinstance(p, UniPoly) and isinstance(q, UniPoly):
        if p.var != q.var or p.degree != q.degree:
            return False
        if p.is_zero():
            return q.is_zero()
        ratio = None
        for a, b in zip(p.coeffs, q.coeffs):
            if (a == 0) != (b == 0):
                return False
            if a == 0:
                continue
            if isinstance(a, ParamPoly) or isinstance(b, ParamPoly):
                return _uni_param_equal(p, q)
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
        return True
    return ParamPoly.coerce(p).equal_up_to_constant(ParamPoly.coerce(q))


def _uni_param_equal(p, q):
    # Flatten both into ParamPolys in (params, main variable) and compare.
    return to_param(p).equal_up_to_constant(to_param(q))


def to_param(F):
    """View a UniPoly as a ParamPoly in its parameters plus the main variable."""
    x = ParamPoly.var(F.var)
    r = ParamPoly()
    for i, c in enumerate(F.coeffs):
        if c != 0:
            r = r + ParamPoly.coerce(c) * x ** i
    return r
