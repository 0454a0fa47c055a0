"""Integer matrix utilities: Smith and Hermite normal forms, ranks, and
sparse exact linear systems (the latter backed by FLINT)."""
from __future__ import annotations

from math import gcd

import flint


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    if not cols:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, c)) for c in cols] for row in A]


def det(A):
    n = len(A)
    if n == 0:
        return 1
    return int(flint.fmpz_mat(A).det())


def integer_rank(A):
    if not A or not A[0]:
        return 0
    return flint.fmpz_mat([list(r) for r in A]).rank()


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V == D, U and V unimodular, D diagonal and
    d_1 | d_2 | ... with nonnegative entries."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(i, t)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(j, t)
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def hermite_normal_form(A):
    """Row-style HNF: upper echelon, positive pivots, entries above a pivot
    reduced into [0, pivot).  Zero rows are dropped."""
    if not A or not A[0]:
        return []
    H = flint.fmpz_mat([list(map(int, r)) for r in A]).hnf()
    rows = [[int(x) for x in r] for r in H.tolist()]
    return [r for r in rows if any(r)]


def ext_gcd_row(c):
    """Unimodular V with c*V == (g, 0, ..., 0), g = gcd(c) >= 0."""
    n = len(c)
    row = list(map(int, c))
    V = identity(n)

    def add_col(dst, src, k):
        row[dst] += k * row[src]
        for r in V:
            r[dst] += k * r[src]

    def swap(i, j):
        row[i], row[j] = row[j], row[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    while True:
        nz = [j for j in range(n) if row[j]]
        if not nz:
            break
        j0 = min(nz, key=lambda j: abs(row[j]))
        swap(0, j0)
        done = True
        for j in range(1, n):
            if row[j]:
                add_col(j, 0, -(row[j] // row[0]))
                if row[j]:
                    done = False
        if done:
            break
    if n and row[0] < 0:
        row[0] = -row[0]
        for r in V:
            r[0] = -r[0]
    return V


def canonical_solution(c, target=1):
    """Canonical integer solution x of c.x == target, or None.

    The particular solution is reduced modulo the HNF of the kernel lattice so
    that each pivot coordinate lies in [0, pivot); this representative is
    unique.
    """
    n = len(c)
    if n == 0:
        return None
    V = ext_gcd_row(c)
    g = sum(ci * vi for ci, vi in zip(c, (r[0] for r in V)))
    if g == 0 or target % g:
        return None
    x = [r[0] * (target // g) for r in V]
    kernel = [[V[i][j] for i in range(n)] for j in range(1, n)]
    for hrow in hermite_normal_form(kernel):
        p = next(k for k, a in enumerate(hrow) if a)
        q = x[p] // hrow[p]
        x = [a - q * b for a, b in zip(x, hrow)]
    return tuple(x)


# ---------------------------------------------------------------------------
# sparse exact linear systems

def _to_flint(rows, ncols):
    M = flint.fmpz_mat(len(rows), ncols)
    for i, row in enumerate(rows):
        for j, a in row.items():
            M[i, j] = a
    return M


def _nonzero_rows(rows):
    return [r for r in rows if r]


def nullspace(rows, ncols):
    """Integer vectors spanning the rational kernel of the sparse system.

    rows: list of {column: int}.  The returned basis is LLL-reduced.
    """
    rows = _nonzero_rows(rows)
    if ncols == 0:
        return []
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    M = _to_flint(rows, ncols)
    N, k = M.nullspace()
    if k == 0:
        return []
    basis = [[int(N[i, j]) for i in range(ncols)] for j in range(k)]
    basis = [_primitive(v) for v in basis]
    reduced = flint.fmpz_mat(basis).lll()
    return [tuple(int(x) for x in r) for r in reduced.tolist() if any(r)]


def _primitive(v):
    g = 0
    for a in v:
        g = gcd(g, a)
    return [a // g for a in v] if g > 1 else list(v)


def rank_sparse(rows, ncols):
    rows = _nonzero_rows(rows)
    if not rows or ncols == 0:
        return 0
    return _to_flint(rows, ncols).rank()


def integer_kernel(rows, ncols):
    """Z-basis of {x in Z^n : rows.x == 0} (saturated), via LLL on [I | W*A^T]."""
    rows = _nonzero_rows(rows)
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    m = len(rows)
    weight = 1 << 40
    M = flint.fmpz_mat(ncols, ncols + m)
    for j in range(ncols):
        M[j, j] = 1
    for i, row in enumerate(rows):
        for j, a in row.items():
            M[j, ncols + i] = weight * a
    L = M.lll()
    out = []
    for r in L.tolist():
        if all(x == 0 for x in r[ncols:]):
            out.append(tuple(int(x) for x in r[:ncols]))
    return out


def solve_integer(rows, rhs, ncols):
    """Integer solution x of the sparse system rows.x == rhs, or None if the
    system has no integer solution."""
    keep = [(r, b) for r, b in zip(rows, rhs) if r or b]
    if any(not r and b for r, b in keep):
        return None
    keep = [(r, b) for r, b in keep if r]
    if not keep:
        return [0] * ncols
    M = flint.fmpz_mat(len(keep), ncols + 1)
    for i, (row, b) in enumerate(keep):
        for j, a in row.items():
            M[i, j] = a
        M[i, ncols] = b
    R, den, rank = M.rref()
    x = [0] * ncols
    integral = True
    for i in range(rank):
        lead = next(j for j in range(ncols + 1) if R[i, j] != 0)
        if lead == ncols:
            return None
        num, d = int(R[i, ncols]), int(R[i, lead])
        if num % d:
            integral = False
            break
        x[lead] = num // d
    if integral:
        if not _check(rows, rhs, x):
            raise AssertionError("integer solve failed verification")
        return x
    aug = [dict(r) for r, _ in keep]
    for r, (_, b) in zip(aug, keep):
        if b:
            r[ncols] = -b
    vec = None
    for v in integer_kernel(aug, ncols + 1):
        if v[ncols] == 0:
            continue
        if vec is None:
            vec = list(v)
            continue
        g, s, t = _xgcd(vec[ncols], v[ncols])
        vec = [s * a + t * b for a, b in zip(vec, v)]
    if vec is None or abs(vec[ncols]) != 1:
        return None
    x = [vec[ncols] * a for a in vec[:ncols]]
    if not _check(rows, rhs, x):
        raise AssertionError("integer solve failed verification")
    return x


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _check(rows, rhs, x):
    return all(sum(a * x[j] for j, a in row.items()) == b for row, b in zip(rows, rhs))
