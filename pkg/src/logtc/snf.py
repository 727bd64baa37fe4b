"""Smith normal form over the integers and the small lattice helpers built on it.

Matrices are lists of lists of Python ints, so arithmetic is exact at any size.
"""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(a):
    return [list(row) for row in a]


def smith_normal_form(a):
    """Return ``(U, D, V, Vinv)`` with ``U @ a @ V == D``.

    ``U`` and ``V`` are unimodular, ``Vinv`` is the inverse of ``V`` and ``D``
    is diagonal with ``d_1 | d_2 | ...``, all nonnegative. Pivots are chosen as
    the entry of smallest nonzero absolute value, ties broken by (row, column).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = _copy(a)
    u = _identity(m)
    v = _identity(n)
    vinv = _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k:
            d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        # col_dst += k * col_src; Vinv gets the inverse row operation
        if k:
            for row in d:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]
            vinv[src] = [x - k * y for x, y in zip(vinv[src], vinv[dst])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    if d[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if d[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if d[i][t] and abs(d[i][t]) < best[0]:
                    best = (abs(d[i][t]), i, t)
            for j in range(t + 1, n):
                if d[t][j] and abs(d[t][j]) < best[0]:
                    best = (abs(d[t][j]), t, j)
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            elif bj != t:
                swap_cols(t, bj)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v, vinv


def elementary_divisors(a):
    if not a or not a[0]:
        return []
    _, d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def rank(a):
    return len(elementary_divisors(a))


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def saturation_basis(generators, dim):
    """Rows spanning the saturation of the subgroup generated by ``generators``.

    Returns ``(basis, complement)``: ``basis`` spans ``span_Q(generators) & Z^dim``
    and ``basis + complement`` is a basis of ``Z^dim``.
    """
    gens = [list(g) for g in generators if any(g)]
    if not gens:
        return [], [row for row in _identity(dim)]
    _, d, _, vinv = smith_normal_form(gens)
    s = sum(1 for i in range(min(len(d), dim)) if d[i][i])
    return vinv[:s], vinv[s:]


def quotient_projection(generators, dim):
    """Integer matrix of ``Z^dim -> Z^dim / saturation(generators)``.

    The rows of the result are dual to the complement basis, so the map is
    surjective with kernel exactly the saturated subgroup.
    """
    basis, complement = saturation_basis(generators, dim)
    full = basis + complement
    if not full:
        return []
    inv = integer_inverse(full)
    s = len(basis)
    # m = c @ full  =>  c = m @ inv; quotient coordinates are c[s:]
    return [[inv[i][j] for i in range(dim)] for j in range(s, dim)]


def integer_inverse(a):
    """Inverse of a unimodular integer matrix."""
    n = len(a)
    u, d, v, _ = smith_normal_form(a)
    if any(d[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # U a V = I  =>  a^-1 = V U
    return matmul(v, u)


def solve_integer(basis_rows, target):
    """Coefficients ``c`` with ``c @ basis_rows == target`` or None."""
    if not basis_rows:
        return [] if not any(target) else None
    k = len(basis_rows)
    # transpose: columns are basis vectors
    a = [[basis_rows[i][j] for i in range(k)] for j in range(len(target))]
    u, d, v, _ = smith_normal_form(a)
    ut = [sum(u[i][j] * target[j] for j in range(len(target))) for i in range(len(u))]
    y = []
    for i in range(len(ut)):
        di = d[i][i] if i < k else 0
        if di == 0:
            if ut[i]:
                return None
            if i < k:
                y.append(0)
        else:
            if ut[i] % di:
                return None
            y.append(ut[i] // di)
    y = y[:k] + [0] * (k - len(y))
    return [sum(v[i][j] * y[j] for j in range(k)) for i in range(k)]
