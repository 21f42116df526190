"""Dense univariate polynomial helpers over an exact field.

Polynomials are lists of coefficients in ascending degree order.  The
coefficient type only needs ring operations, exact division and a truthiness
test for zero, so the same code serves Fractions and extension elements.
"""

from __future__ import annotations


def trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def degree(a) -> int:
    """Degree of a trimmed polynomial; -1 for the zero polynomial."""
    return len(a) - 1


def add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return trim(out)


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    zero = a[0] - a[0]
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(a, c):
    return trim([x * c for x in a])


def divmod_poly(a, b):
    """Euclidean division a = q*b + r with deg r < deg b."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    lead = b[-1]
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    zero = lead - lead
    q = [zero] * (len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = r[i + shift] - c * y
        r.pop()
        r = trim(r)
    return trim(q), r


def monic(a):
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def gcd(a, b):
    """Monic greatest common divisor."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def xgcd(a, b):
    """Return (g, u, v) with u*a + v*b = g, g monic (or zero)."""
    r0, r1 = trim(a), trim(b)
    one = _one_like(r0 or r1)
    u0, u1 = [one], []
    v0, v1 = [], [one]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, sub(u0, mul(q, u1))
        v0, v1 = v1, sub(v0, mul(q, v1))
    if not r0:
        return [], [], []
    lead = r0[-1]
    return monic(r0), [c / lead for c in u0], [c / lead for c in v0]


def _one_like(a):
    c = a[0]
    return c / c if c else c ** 0


def evaluate(a, x):
    acc = None
    for c in reversed(a):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else 0 * x


def resultant(f, g):
    """Resultant of f and g by the Euclidean remainder recursion."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    _, r = divmod_poly(f, g)
    if not r:
        return 0
    k = len(r) - 1
    # res(f, g) = (-1)^(mn) lc(g)^(m-k) res(g, r)
    sign = -1 if (m * n) % 2 else 1
    return sign * g[-1] ** (m - k) * resultant(g, r)
