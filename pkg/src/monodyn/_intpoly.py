"""Dense integer polynomial helpers (lists of ints, lowest degree first).

These are the fast paths behind :mod:`monodyn.exactalg` and
:mod:`monodyn.realroots`. The zero polynomial is the empty list; every
function returns trimmed lists.
"""

from fractions import Fraction
from math import gcd

# Primes used for the modular coprimality shortcut. A modular gcd of degree 0
# proves coprimality over Q whenever the prime does not divide either leading
# coefficient; a nonconstant modular gcd only sends us to the exact path.
_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, c in enumerate(b):
        r[i] += c
    return trim(r)


def sub(a, b):
    return add(a, [-c for c in b])


def scale(a, s):
    if s == 0:
        return []
    return [c * s for c in a]


def _pack(a, bits):
    r = 0
    for c in reversed(a):
        r = (r << bits) + c
    return r


def _unpack(v, bits, count):
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(count):
        c = v & mask
        v >>= bits
        if c >= half:
            c -= 1 << bits
            v += 1
        out.append(c)
    return out


def mul(a, b):
    if not a or not b:
        return []
    if len(a) < 8 or len(b) < 8:
        r = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        return trim(r)
    # Kronecker substitution: pack into one big integer, multiply, unpack.
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 2
    prod = _pack(a, bits) * _pack(b, bits)
    return trim(_unpack(prod, bits, len(a) + len(b) - 1))


def deriv(a):
    return trim([i * a[i] for i in range(1, len(a))])


def content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a):
    """Divide out the content and make the leading coefficient positive."""
    a = trim(a)
    if not a:
        return []
    g = content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def from_fractions(coeffs):
    """Primitive integer polynomial proportional to ``coeffs`` (Fractions)."""
    coeffs = trim(coeffs)
    if not coeffs:
        return []
    den = 1
    for c in coeffs:
        q = Fraction(c).denominator
        den = den * q // gcd(den, q)
    return primitive([int(Fraction(c) * den) for c in coeffs])


def compose(a, b):
    """a(b(x)) by Horner."""
    r = []
    for c in reversed(a):
        r = add(mul(r, b), [c] if c else [])
    return r


def pdivmod(a, b):
    """Pseudo-division: lc(b)^(deg a - deg b + 1) * a = q*b + r."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], trim(a)
    lc = b[-1]
    k = len(a) - len(b) + 1
    q = [0] * k
    for i in range(k - 1, -1, -1):
        c = a[i + db]
        a = [x * lc for x in a]
        q = [x * lc for x in q]
        q[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] -= c * b[j]
    return trim(q), trim(a[:db])


def exact_quotient(a, b):
    """Return (q, s) with a = (q / s) * b exactly, s a positive integer.

    Raises ArithmeticError when b does not divide a over Q.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        if not trim(a):
            return [], 1
        raise ArithmeticError("nonzero remainder in exact division")
    lc = b[-1]
    k = len(a) - len(b) + 1
    s = abs(lc) ** k
    a = [x * s for x in a]
    q = [0] * k
    for i in range(k - 1, -1, -1):
        c = a[i + db]
        qq, r = divmod(c, lc)
        if r:
            raise ArithmeticError("nonzero remainder in exact division")
        q[i] = qq
        if qq:
            for j in range(db + 1):
                a[i + j] -= qq * b[j]
    if any(a[:db]):
        raise ArithmeticError("nonzero remainder in exact division")
    q = trim(q)
    g = gcd(content(q), s)
    return [c // g for c in q], s // g


def eval_frac(a, x):
    x = Fraction(x)
    r = Fraction(0)
    for c in reversed(a):
        r = r * x + c
    return r


def eval_homog(a, num, den):
    """den^deg(a) * a(num/den) as an exact integer (den > 0)."""
    n = len(a) - 1
    if n < 0:
        return 0
    r = a[n]
    p = 1
    for i in range(n - 1, -1, -1):
        p *= den
        r = r * num + a[i] * p
    return r


def sign_at(a, x):
    x = Fraction(x)
    v = eval_homog(a, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


# -- modular arithmetic ----------------------------------------------------

def _mod_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_gcd_degree(a, b, p):
    a = _mod_trim([c % p for c in a])
    b = _mod_trim([c % p for c in b])
    while b:
        inv = pow(b[-1], p - 2, p)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            c = a[-1] * inv % p
            shift = len(a) - 1 - db
            for j in range(db + 1):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            _mod_trim(a)
        a, b = b, a
    return len(a) - 1


def coprime_modular(a, b):
    """True when a and b are certified coprime by a modular gcd; else None."""
    for p in _PRIMES:
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        if _mod_gcd_degree(a, b, p) == 0:
            return True
    return None


# -- exact gcd and squarefree decomposition ---------------------------------

def gcd_poly(a, b):
    """Primitive gcd of integer polynomials (primitive PRS)."""
    a = primitive(a)
    b = primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return [1]
    if coprime_modular(a, b):
        return [1]
    while b:
        _, r = pdivmod(a, b)
        a, b = b, primitive(r)
        if len(b) == 1:
            return [1]
    return primitive(a)


def is_squarefree(a):
    if len(a) <= 2:
        return True
    if coprime_modular(a, deriv(a)):
        return True
    return len(gcd_poly(a, deriv(a))) == 1


def squarefree(a):
    """Primitive squarefree part of a."""
    a = primitive(a)
    if len(a) <= 2 or is_squarefree(a):
        return a
    g = gcd_poly(a, deriv(a))
    q, _ = exact_quotient(a, g)
    return primitive(q)


def _frac_div(d, y):
    # Exact quotient d / y over Q (d, y lists of Fractions or ints).
    d = [Fraction(x) for x in d]
    while d and d[-1] == 0:
        d.pop()
    dy = len(y) - 1
    k = len(d) - dy
    if k <= 0:
        if d:
            raise ArithmeticError("nonzero remainder in exact division")
        return []
    q = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        c = d[i + dy] / y[-1]
        q[i] = c
        for j in range(dy + 1):
            d[i + j] -= c * y[j]
    if any(d[:dy]):
        raise ArithmeticError("nonzero remainder in exact division")
    return q


def yun(a):
    """Squarefree factorisation: list of (factor, multiplicity), factors primitive."""
    a = primitive(a)
    if len(a) <= 1:
        return []
    if is_squarefree(a):
        return [(a, 1)]
    g = gcd_poly(a, deriv(a))
    b = _frac_div(a, g)
    c = _frac_div(deriv(a), g)
    out = []
    i = 1
    while len(b) > 1:
        db = [i_ * b[i_] for i_ in range(1, len(b))]
        n = max(len(c), len(db))
        d = trim([(c[j] if j < len(c) else 0) - (db[j] if j < len(db) else 0) for j in range(n)])
        y = gcd_poly(from_fractions(b), from_fractions(d)) if d else from_fractions(b)
        if len(y) > 1:
            out.append((y, i))
        b = _frac_div(b, y)
        c = _frac_div(d, y) if d else []
        i += 1
    return out
