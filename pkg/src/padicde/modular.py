"""Multimodular Bezout coefficients for polynomials over Q.

The extended Euclidean algorithm over Q is exact but its intermediate
coefficients grow quickly.  Here the cofactors are computed modulo many
word-size primes, glued by the Chinese remainder theorem, recovered by
rational reconstruction and finally checked exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, lcm

from . import polyalg

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int):
    """Primes in decreasing order, starting just below ``bound``."""
    n = bound - 1 if bound % 2 == 0 else bound - 2
    while n > 2:
        if is_probable_prime(n):
            yield n
        n -= 2


_PRIMES: list = []
_PRIME_SOURCE = primes_below(1 << 62)


def _prime(i: int) -> int:
    while len(_PRIMES) <= i:
        _PRIMES.append(next(_PRIME_SOURCE))
    return _PRIMES[i]


def rational_reconstruction(a: int, m: int):
    """The n/d with |n|, d <= sqrt(m/2) and n ≡ a·d (mod m), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    return f if (f.numerator - a * f.denominator) % m == 0 else None


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mul_mod(a, b, ell):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return _trim(out)


def _sub_mod(a, b, ell):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % ell for x, y in zip(a, b)])


def _divmod_mod(a, b, ell):
    inv = pow(b[-1], -1, ell)
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv % ell
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = (r[i + shift] - c * y) % ell
        _trim(r)
    return _trim(q), r


def xgcd_mod(a, b, ell):
    """(u, v) with u·a + v·b = 1 over F_ell, or None when gcd(a, b) ≠ 1 there."""
    r0, r1 = _trim(list(a)), _trim(list(b))
    u0, u1, v0, v1 = [1], [], [], [1]
    while r1:
        q, r = _divmod_mod(r0, r1, ell)
        r0, r1 = r1, r
        u0, u1 = u1, _sub_mod(u0, _mul_mod(q, u1, ell), ell)
        v0, v1 = v1, _sub_mod(v0, _mul_mod(q, v1, ell), ell)
    if len(r0) != 1:
        return None
    inv = pow(r0[0], -1, ell)
    return [c * inv % ell for c in u0], [c * inv % ell for c in v0]


def _integral(poly):
    """Scale a Fraction polynomial to integers; returns (integer poly, scale)."""
    den = lcm(*(Fraction(c).denominator for c in poly)) if poly else 1
    return [int(Fraction(c) * den) for c in poly], den


def bezout(a, b, max_primes: int = 4096):
    """Fraction polynomials (u, v) with u·a + v·b = 1, deg u < deg b, deg v < deg a.

    Returns None when a and b are (almost surely) not coprime over Q, or
    when the prime budget runs out, which only happens for enormous inputs.
    """
    A, da = _integral(a)
    B, db = _integral(b)
    if not A or not B:
        return None
    modulus = 1
    crt_u, crt_v = None, None
    misses = 0
    for count in range(max_primes):
        ell = _prime(count)
        if A[-1] % ell == 0 or B[-1] % ell == 0:
            continue
        res = xgcd_mod([c % ell for c in A], [c % ell for c in B], ell)
        if res is None:
            # ell divides the resultant; three misses before any hit means a common factor
            misses += 1
            if crt_u is None and misses >= 3:
                return None
            continue
        u, v = res
        u += [0] * (len(B) - 1 - len(u))
        v += [0] * (len(A) - 1 - len(v))
        if crt_u is None:
            crt_u, crt_v, modulus = u, v, ell
        else:
            inv = pow(modulus, -1, ell)
            new_mod = modulus * ell
            crt_u = [(x + modulus * ((y - x) * inv % ell)) % new_mod for x, y in zip(crt_u, u)]
            crt_v = [(x + modulus * ((y - x) * inv % ell)) % new_mod for x, y in zip(crt_v, v)]
            modulus = new_mod
        if count % 4:
            continue
        got = _reconstruct(crt_u, crt_v, modulus)
        if got is None:
            continue
        u_q, v_q = got
        if polyalg.add(polyalg.mul(u_q, A), polyalg.mul(v_q, B)) == [Fraction(1)]:
            return [c * da for c in u_q], [c * db for c in v_q]
    return None


def _reconstruct(us, vs, modulus):
    out = []
    for coeffs in (us, vs):
        rec = []
        for c in coeffs:
            f = rational_reconstruction(c, modulus)
            if f is None:
                return None
            rec.append(f)
        out.append(polyalg.trim(rec))
    return out[0], out[1]
