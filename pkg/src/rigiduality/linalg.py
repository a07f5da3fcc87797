"""Small exact linear algebra over fields and commutative rings."""

from __future__ import annotations

from functools import lru_cache


def rank(matrix):
    """Rank of a matrix with entries in a field (Gaussian elimination)."""
    rows = [list(r) for r in matrix if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(matrix, ncols, one=1):
    """Basis of ``{x : matrix * x = 0}`` over a field, as lists."""
    rows = [list(r) for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [one * 0] * ncols
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def det(matrix, zero, one, reduce=None):
    """Determinant by Laplace expansion along rows (memoized on columns).

    Works over any commutative ring; ``reduce`` normalizes intermediate
    entries (e.g. a normal form modulo an ideal).
    """
    n = len(matrix)
    if n == 0:
        return one
    red = reduce or (lambda x: x)

    @lru_cache(maxsize=None)
    def minor(row, cols):
        if row == n:
            return one
        total = zero
        sign = 1
        for k, c in enumerate(cols):
            a = matrix[row][c]
            if a:
                sub = minor(row + 1, cols[:k] + cols[k + 1:])
                if sub:
                    term = a * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        return red(total)

    return minor(0, tuple(range(n)))


def matmul(a, b, zero):
    if not a:
        return []
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(m):
            acc = zero
            for k, x in enumerate(row):
                if x:
                    y = b[k][j]
                    if y:
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out
