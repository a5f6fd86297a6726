"""Integer matrix utilities: Smith invariant factors, kernel lattice bases,
GF(2) kernels, rational rank.

Matrices here are plain nested lists of Python ints. Sizes stay small (tens
of rows), so the classic reduction algorithms with smallest-pivot selection
are plenty.
"""

from __future__ import annotations

from fractions import Fraction


def rational_rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    a = [[Fraction(x) for x in row] for row in mat]
    rows, cols = len(a), len(a[0])
    rk = 0
    for c in range(cols):
        piv = None
        for r in range(rk, rows):
            if a[r][c]:
                piv = r
                break
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        pv = a[rk][c]
        for r in range(rk + 1, rows):
            if a[r][c]:
                f = a[r][c] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        rk += 1
        if rk == rows:
            break
    return rk


def smith_invariant_factors(mat):
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    if not mat or not mat[0]:
        return []
    a = [list(row) for row in mat]
    rows, cols = len(a), len(a[0])
    t = 0
    factors = []
    while t < rows and t < cols:
        # smallest-magnitude nonzero pivot in the trailing block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    piv, best = (i, j), v
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            dirty = False
            for i in range(t + 1, rows):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            for j in range(t + 1, cols):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty:
                break
        # enforce the divisibility chain
        d = a[t][t]
        culprit = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % d:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            a[t] = [x + y for x, y in zip(a[t], a[culprit])]
            continue
        factors.append(abs(d))
        t += 1
    return factors


def integer_kernel_basis(mat, cols=None):
    """Basis of {x in Z^cols : mat @ x = 0} as a list of int vectors.

    Unimodular column reduction; the returned vectors generate the full
    (saturated) kernel lattice. ``cols`` is needed when mat has no rows.
    """
    if not mat:
        if cols is None:
            raise ValueError("need column count for an empty matrix")
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    ncols = len(mat[0]) if cols is None else cols
    a = [list(row) for row in mat]
    rows = len(a)
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_sub(dst, src, q):
        for r in range(rows):
            a[r][dst] -= q * a[r][src]
        for r in range(ncols):
            v[r][dst] -= q * v[r][src]

    def col_swap(c1, c2):
        for r in range(rows):
            a[r][c1], a[r][c2] = a[r][c2], a[r][c1]
        for r in range(ncols):
            v[r][c1], v[r][c2] = v[r][c2], v[r][c1]

    frozen = 0
    for row in range(rows):
        while True:
            cands = [c for c in range(frozen, ncols) if a[row][c]]
            if len(cands) <= 1:
                break
            c0 = min(cands, key=lambda c: abs(a[row][c]))
            for c in cands:
                if c != c0:
                    col_sub(c, c0, a[row][c] // a[row][c0])
        cands = [c for c in range(frozen, ncols) if a[row][c]]
        if cands:
            col_swap(frozen, cands[0])
            frozen += 1
    return [[v[r][c] for r in range(ncols)] for c in range(frozen, ncols)]


def gf2_kernel_basis(mat, cols=None):
    """Basis of the kernel over GF(2), vectors with entries in {0, 1}."""
    if not mat:
        if cols is None:
            raise ValueError("need column count for an empty matrix")
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    ncols = len(mat[0]) if cols is None else cols
    a = [[x & 1 for x in row] for row in mat]
    rows = len(a)
    pivot_of_col = {}
    r = 0
    for c in range(ncols):
        src = None
        for rr in range(r, rows):
            if a[rr][c]:
                src = rr
                break
        if src is None:
            continue
        a[r], a[src] = a[src], a[r]
        for rr in range(rows):
            if rr != r and a[rr][c]:
                a[rr] = [x ^ y for x, y in zip(a[rr], a[r])]
        pivot_of_col[c] = r
        r += 1
        if r == rows:
            break
    basis = []
    for fc in range(ncols):
        if fc in pivot_of_col:
            continue
        vec = [0] * ncols
        vec[fc] = 1
        for c, pr in pivot_of_col.items():
            vec[c] = a[pr][fc]
        basis.append(vec)
    return basis
