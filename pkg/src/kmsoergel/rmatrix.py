"""Dense matrices over R = Z[X] as lists of lists of LaurentPoly."""
from __future__ import annotations

from .laurent import LaurentPoly, divide_exact


def zeros(m, n, rank):
    z = LaurentPoly.zero(rank)
    return [[z] * n for _ in range(m)]


def eye(n, rank):
    one, z = LaurentPoly.one(rank), LaurentPoly.zero(rank)
    return [[one if i == j else z for j in range(n)] for i in range(n)]


def shape(M):
    return len(M), (len(M[0]) if M else 0)


def mul(A, B, rank, ncols=None):
    m = len(A)
    k = len(B)
    n = (len(B[0]) if B else 0) if ncols is None else ncols
    out = zeros(m, n, rank)
    for i in range(m):
        row = A[i]
        acc = [dict() for _ in range(n)]
        for t in range(k):
            a = row[t]
            if a.is_zero():
                continue
            Bt = B[t]
            for j in range(n):
                b = Bt[j]
                if b.is_zero():
                    continue
                d = acc[j]
                for e1, c1 in a.items():
                    for e2, c2 in b.items():
                        e = tuple(x + y for x, y in zip(e1, e2))
                        d[e] = d.get(e, 0) + c1 * c2
        out[i] = [LaurentPoly._raw({e: c for e, c in d.items() if c}, rank) for d in acc]
    return out


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def neg(A):
    return [[-a for a in r] for r in A]


def scale(A, p):
    return [[p * a for a in r] for r in A]


def transpose(A, n_rows_if_empty=0):
    if not A:
        return [[] for _ in range(n_rows_if_empty)]
    return [list(c) for c in zip(*A)]


def equal(A, B):
    return shape(A) == shape(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero(A):
    return all(a.is_zero() for r in A for a in r)


def substitute(A, f):
    return [[a.substitute(f) for a in r] for r in A]


def block_diag(blocks, rank):
    m = sum(len(b) for b in blocks)
    n = sum(shape(b)[1] for b in blocks)
    out = zeros(m, n, rank)
    i0 = j0 = 0
    for b in blocks:
        bm, bn = shape(b)
        for i in range(bm):
            out[i0 + i][j0:j0 + bn] = list(b[i])
        i0 += bm
        j0 += bn
    return out


def submatrix(A, rows, cols):
    return [[A[i][j] for j in cols] for i in rows]


def evaluate_at_one(A):
    """Specialize every e^lambda to 1 (integer matrix)."""
    return [[sum(c for _, c in a.items()) for a in r] for r in A]


def det(A, rank):
    """Fraction-free Bareiss elimination with exact Laurent division."""
    n = len(A)
    if n == 0:
        return LaurentPoly.one(rank)
    M = [list(r) for r in A]
    sign = 1
    prev = LaurentPoly.one(rank)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly.zero(rank)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = divide_exact(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def inverse(A, rank):
    """Inverse over R, or None when det(A) is not a unit."""
    n = len(A)
    M = [list(r) + list(e) for r, e in zip(A, eye(n, rank))]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col].is_unit()), None)
        if piv is None:
            return _inverse_adjugate(A, rank)
        M[col], M[piv] = M[piv], M[col]
        u = M[col][col].inverse_unit()
        M[col] = [u * a for a in M[col]]
        for i in range(n):
            if i != col and not M[i][col].is_zero():
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return [r[n:] for r in M]


def _inverse_adjugate(A, rank):
    d = det(A, rank)
    if not d.is_unit():
        return None
    dinv = d.inverse_unit()
    n = len(A)
    out = zeros(n, n, rank)
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = det(minor, rank)
            out[i][j] = dinv * (cof if (i + j) % 2 == 0 else -cof)
    return out


def to_json(A):
    return [[a.to_json() for a in r] for r in A]


def from_json(obj, rank):
    return [[LaurentPoly.from_json(a, rank) for a in r] for r in obj]


def support_bound(A):
    return max((a.max_abs_exponent() for r in A for a in r if not a.is_zero()), default=0)
