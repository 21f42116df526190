"""Small dense matrices over a field or over Laurent series.

Matrices are lists of rows.  Sizes stay tiny (rank ≤ 6 or so), so
determinants of series matrices use cofactor expansion, which needs no
division and therefore works for truncated entries too.
"""

from __future__ import annotations

from .extended import INF
from .laurent import LaurentSeries


# -- constant matrices over the coefficient field ------------------------------------

def rank(rows) -> int:
    """Rank by Gaussian elimination over the field (exact)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_cols = len(m[0])
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col] / m[r][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for l in range(k):
                acc = acc + a[i][l] * b[l][j]
            row.append(acc)
        out.append(row)
    return out


def mat_pow(a, e: int, one):
    n = len(a)
    result = [[one if i == j else one - one for j in range(n)] for i in range(n)]
    for _ in range(e):
        result = mat_mul(result, a)
    return result


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


# -- matrices of Laurent series --------------------------------------------------------

def identity(field, n: int):
    return [[LaurentSeries.constant(field, 1) if i == j else LaurentSeries.zero(field)
             for j in range(n)] for i in range(n)]


def zeros(field, n: int, m: int | None = None):
    m = n if m is None else m
    return [[LaurentSeries.zero(field) for _ in range(m)] for _ in range(n)]


def smul(a, b):
    """Product of two series matrices, skipping zero entries."""
    n, k, m = len(a), len(b), len(b[0])
    field = a[0][0].field
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(k):
                x, y = a[i][l], b[l][j]
                if x.is_zero() or y.is_zero():
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else LaurentSeries.zero(field))
        out.append(row)
    return out


def sadd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def ssub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smap(f, a):
    return [[f(x) for x in row] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def minor(a, i: int, j: int):
    return [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]


def sdet(a):
    """Determinant by cofactor expansion along the first row."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    acc = None
    for j in range(n):
        if a[0][j].is_zero():
            continue
        term = a[0][j] * sdet(minor(a, 0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else LaurentSeries.zero(a[0][0].field)


def cofactor(a, i: int, j: int):
    n = len(a)
    if n == 1:
        return LaurentSeries.constant(a[0][0].field, 1)
    c = sdet(minor(a, i, j))
    return -c if (i + j) % 2 else c


def adjugate(a):
    n = len(a)
    return [[cofactor(a, j, i) for j in range(n)] for i in range(n)]


def kron(a, b):
    """Kronecker product of series matrices."""
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return out


def block_diag(a, b):
    field = a[0][0].field
    n, m = len(a), len(b)
    out = []
    for row in a:
        out.append(list(row) + [LaurentSeries.zero(field)] * m)
    for row in b:
        out.append([LaurentSeries.zero(field)] * n + list(row))
    return out


def stored_lambda(a, s):
    """min over entries of λ_s (exact on exact entries)."""
    best = INF
    for row in a:
        for x in row:
            lam = x.stored_lambda(s)
            if lam < best:
                best = lam
    return best


def certified_lambda(a, s):
    """Guaranteed lower bound on min λ_s over entries, or None."""
    best = INF
    for row in a:
        for x in row:
            lam = x.certified_lambda(s)
            if lam is None:
                return None
            if lam < best:
                best = lam
    return best
