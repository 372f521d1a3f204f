"""Pure-Python kernels, the fallback twin of the compiled ``_ckernels``.

Integer polynomials are plain lists of Python ints, lowest degree first.
"""

import math

import numpy as np


def taylor_shift1(coeffs):
    """Coefficients of p(x + 1)."""
    a = list(coeffs)
    n = len(a) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += a[j + 1]
    return a


def sign_variations(coeffs):
    last = 0
    v = 0
    for c in coeffs:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                v += 1
            last = s
    return v


def _test_unit(p):
    # Variations of (x+1)^n p(1/(x+1)), capped at 2 with early exit.
    w = p[::-1]
    n = len(w) - 1
    last = 0
    v = 0
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            w[j] += w[j + 1]
        c = w[i]
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                v += 1
                if v >= 2:
                    return 2
            last = s
    c = w[n]
    if c and last and (c > 0) != (last > 0):
        v += 1
    return v


def descartes_unit(coeffs):
    """Isolate the roots of a squarefree integer polynomial inside (0, 1).

    Requires p(0) != 0 and p(1) != 0. Returns ``(kind, c, k)`` triples:
    kind 0 is an exact root at c/2^k, kind 1 an open interval
    (c/2^k, (c+1)/2^k) holding exactly one root.
    """
    out = []
    if len(coeffs) < 2:
        return out
    stack = [(list(coeffs), 0, 0)]
    while stack:
        p, c, k = stack.pop()
        n = len(p) - 1
        if n < 1:
            continue
        v = sign_variations(p)
        if v == 0:
            continue
        if v == 1:
            s1 = sum(p)
            if s1 and (s1 > 0) != (p[0] > 0):
                out.append((1, c, k))
            continue
        v = _test_unit(p)
        if v == 0:
            continue
        if v == 1:
            out.append((1, c, k))
            continue
        left = [p[i] << (n - i) for i in range(n + 1)]
        right = taylor_shift1(left)
        if right[0] == 0:
            out.append((0, 2 * c + 1, k + 1))
            right = right[1:]
        stack.append((right, 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    if out:
        top = max(t[2] for t in out)
        out.sort(key=lambda t: (t[1] << (top - t[2]), t[0]))
    return out


class IntPoly:
    """Integer polynomial prepared for repeated exact sign queries."""

    def __init__(self, coeffs):
        if not coeffs:
            raise ValueError("empty coefficient list")
        self._a = [int(c) for c in coeffs]

    @property
    def degree(self):
        return len(self._a) - 1

    def eval_dyadic(self, num, s):
        """Return p(num / 2^s) * 2^(s*deg p) as an exact integer."""
        if s < 0:
            num <<= -s
            s = 0
        a = self._a
        n = len(a) - 1
        r = a[n]
        for i in range(n - 1, -1, -1):
            r = r * num + (a[i] << (s * (n - i)))
        return r

    def sign_dyadic(self, num, s):
        r = self.eval_dyadic(num, s)
        return (r > 0) - (r < 0)

    def sign_rational(self, num, den):
        """Sign of p(num / den) for den > 0."""
        a = self._a
        n = len(a) - 1
        r = a[n]
        pw = 1
        for i in range(n - 1, -1, -1):
            pw *= den
            r = r * num + a[i] * pw
        return (r > 0) - (r < 0)

    def refine(self, lo_num, s, target_s):
        """Bisect (lo_num/2^s, (lo_num+1)/2^s) down to level target_s.

        The interval must hold exactly one root, with a sign change across
        it. Returns ``(kind, num, s)`` as in :func:`descartes_unit`.
        """
        slo = self.sign_dyadic(lo_num, s)
        if slo == 0:
            return (0, lo_num, s)
        while s < target_s:
            lo_num *= 2
            s += 1
            smid = self.sign_dyadic(lo_num + 1, s)
            if smid == 0:
                return (0, lo_num + 1, s)
            if smid == slo:
                lo_num += 1
        return (1, lo_num, s)


def cubic_orbit(c0, c1, c2, c3, x0, burn_in, steps, bound):
    """Iterate x -> c0 + c1 x + c2 x^2 + c3 x^3.

    Returns ``(samples, diverged_at)``; diverged_at is -1 when the orbit stays
    within ``bound`` for burn_in + steps iterations, otherwise the index of
    the first iterate whose magnitude exceeded it (samples then truncated).
    """
    x = float(x0)
    for t in range(burn_in):
        x = c0 + x * (c1 + x * (c2 + x * c3))
        if not abs(x) <= bound:
            return np.empty(0), t + 1
    out = np.empty(steps)
    for t in range(steps):
        x = c0 + x * (c1 + x * (c2 + x * c3))
        if not abs(x) <= bound:
            return out[:t], burn_in + t + 1
        out[t] = x
    return out, -1


def _iterate_block(c0, c1, c2, c3, x, count, bound, alive):
    # Vectorised iteration; cells that leave the bound are frozen at inf.
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(count):
            x = np.where(alive, c0 + x * (c1 + x * (c2 + x * c3)), x)
            alive &= np.abs(x) <= bound
    return x


def cubic_periods(c0, c1, c2, c3, x0, burn_in, window, max_period, tol, bound):
    """Detected period per cell; -1 marks divergence, max_period marks 'complex'."""
    c0, c1, c2, c3 = (np.asarray(v, dtype=np.float64) for v in (c0, c1, c2, c3))
    x = np.array(x0, dtype=np.float64)
    alive = np.ones(x.shape, dtype=bool)
    x = _iterate_block(c0, c1, c2, c3, x, burn_in, bound, alive)
    w = np.empty((window,) + x.shape)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(window):
            x = np.where(alive, c0 + x * (c1 + x * (c2 + x * c3)), x)
            alive &= np.abs(x) <= bound
            w[t] = x
    res = np.full(x.shape, max_period, dtype=np.int32)
    undecided = alive.copy()
    scale = np.maximum(1.0, np.abs(w))
    with np.errstate(invalid="ignore"):
        for p in range(1, max_period + 1):
            ok = np.all(np.abs(w[p:] - w[:-p]) < tol * scale[:-p], axis=0)
            hit = undecided & ok
            res[hit] = p
            undecided &= ~ok
    res[~alive] = -1
    return res


def cubic_limits(c0, c1, c2, c3, x0, burn_in, bound):
    """Final iterate after burn_in steps per cell (inf when divergent)."""
    c0, c1, c2, c3 = (np.asarray(v, dtype=np.float64) for v in (c0, c1, c2, c3))
    x = np.array(x0, dtype=np.float64)
    alive = np.ones(x.shape, dtype=bool)
    x = _iterate_block(c0, c1, c2, c3, x, burn_in, bound, alive)
    x[~alive] = math.inf
    return x
