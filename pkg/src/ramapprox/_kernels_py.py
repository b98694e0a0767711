"""Pure-Python dense polynomial kernels over the prime field F_p.

Polynomials are lists of ints in ``[0, p)``, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).  The compiled module
``_kernels`` exports the same functions with the same signatures.
"""


def gf_trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return list(a[:n])


def gf_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return gf_trim(out)


def gf_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return gf_trim(out)


def gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return gf_trim([c % p for c in out])


def gf_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    if len(r) <= db:
        return [], gf_trim(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] % p
        if c:
            c = c * inv % p
            q[k] = c
            for j in range(db + 1):
                r[k + j] = (r[k + j] - c * b[j]) % p
    return gf_trim(q), gf_trim(r[:db])


def gf_monic(a, p):
    if not a:
        return []
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def gf_gcd(a, b, p):
    a = gf_trim(a)
    b = gf_trim(b)
    while b:
        a, b = b, gf_divmod(a, b, p)[1]
    return gf_monic(a, p)


def gf_mulmod(a, b, m, p):
    return gf_divmod(gf_mul(a, b, p), m, p)[1]
