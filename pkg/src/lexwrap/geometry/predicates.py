"""Exact orientation / in-sphere predicates on integer coordinates."""

from __future__ import annotations


def det(m: list) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        a, b, c = m
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def orientation(pts) -> int:
    """Sign of det[p_1 - p_0, ..., p_d - p_0] for d+1 points in R^d."""
    p0 = pts[0]
    rows = [[x - y for x, y in zip(q, p0)] for q in pts[1:]]
    v = det(rows)
    return (v > 0) - (v < 0)


def insphere(pts, q) -> int:
    """+1 if q is strictly inside the circumsphere of the d-simplex ``pts``,
    -1 if strictly outside, 0 if on it. Independent of the vertex order."""
    d = len(q)
    rows = []
    for p in pts:
        u = [x - y for x, y in zip(p, q)]
        u.append(sum(x * x for x in u))
        rows.append(u)
    lifted = det(rows)
    o = orientation(pts)
    if o == 0:
        raise ValueError("in-sphere test on a degenerate simplex")
    # for a positively oriented simplex, inside <=> (-1)^d * lifted > 0
    s = lifted * o * (-1) ** d
    return (s > 0) - (s < 0)
