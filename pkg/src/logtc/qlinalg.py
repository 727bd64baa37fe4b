"""Small exact linear algebra over the rationals (row reduction and solving)."""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                k = a[i][c]
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows):
    return len(rref(rows)[1]) if rows else 0


def in_span(vectors, target):
    """True iff ``target`` is a rational combination of ``vectors``."""
    if not any(target):
        return True
    if not vectors:
        return False
    return rank(list(vectors)) == rank(list(vectors) + [list(target)])


def solve_linear_map(sources, images):
    """The matrix ``L`` (rows = image coordinates) with ``L @ s = img`` for all pairs.

    Returns None when the data is inconsistent with a linear map or the
    sources do not span.
    """
    if not sources:
        return None
    dim = len(sources[0])
    if rank(sources) != dim:
        return None
    out_dim = len(images[0]) if images else 0
    rows = []
    for k in range(out_dim):
        # solve sources @ x = column k of images
        aug = [list(s) + [img[k]] for s, img in zip(sources, images)]
        red, piv = rref(aug)
        if dim in piv:
            return None
        x = [Fraction(0)] * dim
        for i, c in enumerate(piv):
            x[c] = red[i][dim]
        rows.append(x)
    return rows


def apply(matrix, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in matrix]
