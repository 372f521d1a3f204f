# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: GMP integer polynomial kernels and cubic-map iteration.

Every function here has a pure-Python twin in :mod:`monodyn._pykernels` with
identical signatures and results; :mod:`monodyn.kernels` picks one at import.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport fabs
from cpython.bytes cimport PyBytes_FromStringAndSize

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef extern from "gmp.h" nogil:
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct* mpz_ptr
    ctypedef __mpz_struct mpz_t[1]
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_ptr)
    void mpz_set_si(mpz_ptr, long)
    void mpz_add(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_mul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_mul_2exp(mpz_ptr, mpz_ptr, unsigned long)
    void mpz_neg(mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    size_t mpz_sizeinbase(mpz_ptr, int)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void*)
    void* mpz_export(void*, size_t*, int, size_t, int, size_t, mpz_ptr)


cdef void _load(mpz_ptr z, object v):
    cdef bytes b
    cdef Py_ssize_t nbytes
    neg = v < 0
    if neg:
        v = -v
    nbytes = (v.bit_length() + 7) // 8
    if nbytes == 0:
        mpz_set_si(z, 0)
        return
    b = v.to_bytes(nbytes, "little")
    mpz_import(z, nbytes, -1, 1, -1, 0, <const char*>b)
    if neg:
        mpz_neg(z, z)


cdef object _store(mpz_ptr z):
    cdef size_t count = 0
    cdef size_t size = (mpz_sizeinbase(z, 2) + 7) // 8
    cdef char* buf
    cdef int sgn = mpz_sgn(z)
    if sgn == 0:
        return 0
    buf = <char*>malloc(size + 1)
    try:
        mpz_export(buf, &count, -1, 1, -1, 0, z)
        v = int.from_bytes(PyBytes_FromStringAndSize(buf, count), "little")
    finally:
        free(buf)
    return -v if sgn < 0 else v


cdef class _ZArray:
    """Owned array of n+1 GMP integers (a polynomial of degree n)."""
    cdef mpz_ptr a
    cdef int n

    def __cinit__(self, int n):
        cdef int i
        self.n = n
        self.a = <mpz_ptr>malloc((n + 1) * sizeof(mpz_t))
        if self.a == NULL:
            raise MemoryError()
        for i in range(n + 1):
            mpz_init(&self.a[i])

    def __dealloc__(self):
        cdef int i
        if self.a != NULL:
            for i in range(self.n + 1):
                mpz_clear(&self.a[i])
            free(self.a)


cdef _ZArray _from_list(list coeffs):
    cdef _ZArray z = _ZArray(len(coeffs) - 1)
    cdef int i
    for i in range(z.n + 1):
        _load(&z.a[i], coeffs[i])
    return z


cdef list _to_list(_ZArray z):
    return [_store(&z.a[i]) for i in range(z.n + 1)]


cdef void _taylor1(mpz_ptr a, int n) noexcept nogil:
    cdef int i, j
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            mpz_add(&a[j], &a[j], &a[j + 1])


cdef int _var(mpz_ptr a, int n) noexcept nogil:
    cdef int i, s, last = 0, v = 0
    for i in range(n + 1):
        s = mpz_sgn(&a[i])
        if s != 0:
            if last != 0 and s != last:
                v += 1
            last = s
    return v


cdef int _test_unit(mpz_ptr p, int n, mpz_ptr w) noexcept nogil:
    # Descartes bound for roots in (0, 1): variations of (x+1)^n p(1/(x+1)),
    # capped at 2 with early exit.
    cdef int i, j, s, last = 0, v = 0
    for i in range(n + 1):
        mpz_set(&w[i], &p[n - i])
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            mpz_add(&w[j], &w[j], &w[j + 1])
        s = mpz_sgn(&w[i])
        if s != 0:
            if last != 0 and s != last:
                v += 1
                if v >= 2:
                    return 2
            last = s
    s = mpz_sgn(&w[n])
    if s != 0 and last != 0 and s != last:
        v += 1
    return v


def taylor_shift1(list coeffs):
    """Coefficients of p(x + 1)."""
    if len(coeffs) <= 1:
        return list(coeffs)
    cdef _ZArray z = _from_list(coeffs)
    _taylor1(z.a, z.n)
    return _to_list(z)


def sign_variations(list coeffs):
    cdef int last = 0, v = 0, s
    for c in coeffs:
        s = (c > 0) - (c < 0)
        if s != 0:
            if last != 0 and s != last:
                v += 1
            last = s
    return v


def descartes_unit(list coeffs):
    """Isolate the roots of a squarefree integer polynomial inside (0, 1).

    Requires p(0) != 0 and p(1) != 0. Returns ``(kind, c, k)`` triples:
    kind 0 is an exact root at c/2^k, kind 1 an open interval
    (c/2^k, (c+1)/2^k) holding exactly one root.
    """
    cdef _ZArray p, left, right, work
    cdef int n, i, v, s0, s1
    cdef list out = []
    cdef list stack
    cdef object c, k
    n = len(coeffs) - 1
    if n < 1:
        return out
    work = _ZArray(n)
    stack = [(_from_list(coeffs), 0, 0)]
    cdef mpz_t acc
    mpz_init(acc)
    try:
        while stack:
            p, c, k = stack.pop()
            n = p.n
            if n < 1:
                continue
            # Cheap exclusion using the number of positive roots of p itself.
            v = _var(p.a, n)
            if v == 0:
                continue
            if v == 1:
                mpz_set_si(acc, 0)
                for i in range(n + 1):
                    mpz_add(acc, acc, &p.a[i])
                s0 = mpz_sgn(&p.a[0])
                s1 = mpz_sgn(acc)
                if s1 != 0 and s1 != s0:
                    out.append((1, c, k))
                continue
            v = _test_unit(p.a, n, work.a)
            if v == 0:
                continue
            if v == 1:
                out.append((1, c, k))
                continue
            left = _ZArray(n)
            for i in range(n + 1):
                mpz_mul_2exp(&left.a[i], &p.a[i], n - i)
            right = _ZArray(n)
            for i in range(n + 1):
                mpz_set(&right.a[i], &left.a[i])
            _taylor1(right.a, n)
            if mpz_sgn(&right.a[0]) == 0:
                out.append((0, 2 * c + 1, k + 1))
                shifted = _ZArray(n - 1)
                for i in range(n):
                    mpz_set(&shifted.a[i], &right.a[i + 1])
                right = shifted
            stack.append((right, 2 * c + 1, k + 1))
            stack.append((left, 2 * c, k + 1))
    finally:
        mpz_clear(acc)
    if out:
        top = max(t[2] for t in out)
        out.sort(key=lambda t: (t[1] << (top - t[2]), t[0]))
    return out


cdef int _sign_at(_ZArray p, object num, object s, mpz_ptr r, mpz_ptr m, mpz_ptr t) except -2:
    # sign of p(num / 2^s), s >= 0, via homogeneous Horner.
    cdef int i, n = p.n
    cdef unsigned long sh = s
    _load(m, num)
    mpz_set(r, &p.a[n])
    for i in range(n - 1, -1, -1):
        mpz_mul(r, r, m)
        mpz_mul_2exp(t, &p.a[i], sh * (n - i))
        mpz_add(r, r, t)
    return mpz_sgn(r)


cdef class IntPoly:
    """Integer polynomial held in GMP form for repeated exact sign queries."""
    cdef _ZArray p
    cdef mpz_t r, m, t

    def __cinit__(self, list coeffs):
        mpz_init(self.r); mpz_init(self.m); mpz_init(self.t)

    def __init__(self, list coeffs):
        if not coeffs:
            raise ValueError("empty coefficient list")
        self.p = _from_list(coeffs)

    def __dealloc__(self):
        mpz_clear(self.r); mpz_clear(self.m); mpz_clear(self.t)

    @property
    def degree(self):
        return self.p.n

    def eval_dyadic(self, num, int s):
        """Return p(num / 2^s) * 2^(s*deg p) as an exact integer."""
        if s < 0:
            num = num << (-s)
            s = 0
        _sign_at(self.p, num, s, self.r, self.m, self.t)
        return _store(self.r)

    def sign_dyadic(self, num, int s):
        if s < 0:
            num = num << (-s)
            s = 0
        return _sign_at(self.p, num, s, self.r, self.m, self.t)

    def sign_rational(self, num, den):
        """Sign of p(num / den) for den > 0."""
        cdef int i, n = self.p.n
        cdef mpz_t dp, dn
        mpz_init(dp)
        mpz_init(dn)
        try:
            _load(self.m, num)
            _load(dn, den)
            mpz_set_si(dp, 1)
            mpz_set(self.r, &self.p.a[n])
            for i in range(n - 1, -1, -1):
                mpz_mul(dp, dp, dn)
                mpz_mul(self.r, self.r, self.m)
                mpz_mul(self.t, &self.p.a[i], dp)
                mpz_add(self.r, self.r, self.t)
            return mpz_sgn(self.r)
        finally:
            mpz_clear(dp)
            mpz_clear(dn)

    def refine(self, lo_num, int s, int target_s):
        """Bisect (lo_num/2^s, (lo_num+1)/2^s) down to level target_s.

        The interval must hold exactly one root, with a sign change across
        it. Returns ``(kind, num, s)`` as in :func:`descartes_unit`.
        """
        cdef int slo, smid
        slo = self.sign_dyadic(lo_num, s)
        if slo == 0:
            return (0, lo_num, s)
        while s < target_s:
            lo_num = 2 * lo_num
            s += 1
            smid = self.sign_dyadic(lo_num + 1, s)
            if smid == 0:
                return (0, lo_num + 1, s)
            if smid == slo:
                lo_num = lo_num + 1
        return (1, lo_num, s)


def cubic_orbit(double c0, double c1, double c2, double c3, double x0,
                long burn_in, long steps, double bound):
    """Iterate x -> c0 + c1 x + c2 x^2 + c3 x^3.

    Returns ``(samples, diverged_at)``; diverged_at is -1 when the orbit stays
    within ``bound`` for burn_in + steps iterations, otherwise the index of
    the first iterate whose magnitude exceeded it (samples then truncated).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(steps, dtype=np.float64)
    cdef double x = x0
    cdef long t, hit = -1
    with nogil:
        for t in range(burn_in):
            x = c0 + x * (c1 + x * (c2 + x * c3))
            if not (fabs(x) <= bound):
                hit = t
                break
    if hit >= 0:
        return out[:0], hit + 1
    with nogil:
        for t in range(steps):
            x = c0 + x * (c1 + x * (c2 + x * c3))
            if not (fabs(x) <= bound):
                hit = t
                break
            out[t] = x
    if hit >= 0:
        return out[:hit], burn_in + hit + 1
    return out, -1


cdef int _period(double* w, long m, int max_period, double tol) noexcept nogil:
    cdef int p
    cdef long k
    cdef double sc
    cdef bint ok
    for p in range(1, max_period + 1):
        ok = True
        for k in range(m - p):
            sc = fabs(w[k])
            if sc < 1.0:
                sc = 1.0
            if not (fabs(w[k + p] - w[k]) < tol * sc):
                ok = False
                break
        if ok:
            return p
    return max_period


def cubic_periods(double[:] c0, double[:] c1, double[:] c2, double[:] c3,
                  double[:] x0, long burn_in, long window, int max_period,
                  double tol, double bound):
    """Detected period per cell; -1 marks divergence, max_period marks 'complex'."""
    cdef Py_ssize_t n = c0.shape[0], i
    cdef cnp.ndarray[cnp.int32_t, ndim=1] res = np.empty(n, dtype=np.int32)
    cdef double* w = <double*>malloc(window * sizeof(double))
    cdef double x, a0, a1, a2, a3
    cdef long t
    cdef bint div
    if w == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                a0 = c0[i]; a1 = c1[i]; a2 = c2[i]; a3 = c3[i]
                x = x0[i]
                div = False
                for t in range(burn_in):
                    x = a0 + x * (a1 + x * (a2 + x * a3))
                    if not (fabs(x) <= bound):
                        div = True
                        break
                if not div:
                    for t in range(window):
                        x = a0 + x * (a1 + x * (a2 + x * a3))
                        w[t] = x
                        if not (fabs(x) <= bound):
                            div = True
                            break
                if div:
                    res[i] = -1
                else:
                    res[i] = _period(w, window, max_period, tol)
    finally:
        free(w)
    return res


def cubic_limits(double[:] c0, double[:] c1, double[:] c2, double[:] c3,
                 double[:] x0, long burn_in, double bound):
    """Final iterate after burn_in steps per cell (inf when divergent)."""
    cdef Py_ssize_t n = c0.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] res = np.empty(n, dtype=np.float64)
    cdef double x, a0, a1, a2, a3
    cdef long t
    with nogil:
        for i in range(n):
            a0 = c0[i]; a1 = c1[i]; a2 = c2[i]; a3 = c3[i]
            x = x0[i]
            for t in range(burn_in):
                x = a0 + x * (a1 + x * (a2 + x * a3))
                if not (fabs(x) <= bound):
                    x = 1.0 / 0.0
                    break
            res[i] = x
    return res
