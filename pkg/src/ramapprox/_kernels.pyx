# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled dense polynomial kernels over F_p (see _kernels_py for the contract)."""

from libc.stdlib cimport malloc, free


cdef long _inv(long a, long p):
    cdef long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef list _trim_arr(long *c, Py_ssize_t n):
    while n and c[n - 1] == 0:
        n -= 1
    return [c[i] for i in range(n)]


def gf_trim(a):
    cdef Py_ssize_t n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return list(a[:n])


def gf_add(a, b, long p):
    cdef Py_ssize_t la = len(a), lb = len(b), n = max(la, lb), i
    cdef long *c = <long *> malloc(max(n, 1) * sizeof(long))
    try:
        for i in range(n):
            c[i] = 0
        for i in range(la):
            c[i] = a[i]
        for i in range(lb):
            c[i] = (c[i] + <long> b[i]) % p
        return _trim_arr(c, n)
    finally:
        free(c)


def gf_sub(a, b, long p):
    cdef Py_ssize_t la = len(a), lb = len(b), n = max(la, lb), i
    cdef long *c = <long *> malloc(max(n, 1) * sizeof(long))
    try:
        for i in range(n):
            c[i] = 0
        for i in range(la):
            c[i] = a[i]
        for i in range(lb):
            c[i] = (c[i] - <long> b[i]) % p
            if c[i] < 0:
                c[i] += p
        return _trim_arr(c, n)
    finally:
        free(c)


def gf_mul(a, b, long p):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    if la == 0 or lb == 0:
        return []
    cdef long *x = <long *> malloc(la * sizeof(long))
    cdef long *y = <long *> malloc(lb * sizeof(long))
    cdef long *c = <long *> malloc((la + lb - 1) * sizeof(long))
    cdef long xi
    try:
        for i in range(la):
            x[i] = a[i]
        for i in range(lb):
            y[i] = b[i]
        for i in range(la + lb - 1):
            c[i] = 0
        for i in range(la):
            xi = x[i]
            if xi:
                for j in range(lb):
                    c[i + j] = (c[i + j] + xi * y[j]) % p
        return _trim_arr(c, la + lb - 1)
    finally:
        free(x)
        free(y)
        free(c)


def gf_divmod(a, b, long p):
    cdef Py_ssize_t la = len(a), lb = len(b), db, k, j
    if lb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = lb - 1
    if la <= db:
        return [], gf_trim(a)
    cdef long *r = <long *> malloc(la * sizeof(long))
    cdef long *y = <long *> malloc(lb * sizeof(long))
    cdef long *q = <long *> malloc((la - db) * sizeof(long))
    cdef long inv, c
    try:
        for k in range(la):
            r[k] = a[k]
        for k in range(lb):
            y[k] = b[k]
        inv = _inv(y[db], p)
        for k in range(la - db):
            q[k] = 0
        for k in range(la - 1 - db, -1, -1):
            c = r[k + db] % p
            if c:
                c = c * inv % p
                q[k] = c
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - c * y[j]) % p
                    if r[k + j] < 0:
                        r[k + j] += p
        return _trim_arr(q, la - db), _trim_arr(r, db)
    finally:
        free(r)
        free(y)
        free(q)


def gf_monic(a, long p):
    if not a:
        return []
    cdef long inv = _inv(a[len(a) - 1], p)
    return [(<long> x) * inv % p for x in a]


def gf_gcd(a, b, long p):
    a = gf_trim(a)
    b = gf_trim(b)
    while b:
        a, b = b, gf_divmod(a, b, p)[1]
    return gf_monic(a, p)


def gf_mulmod(a, b, m, long p):
    return gf_divmod(gf_mul(a, b, p), m, p)[1]
