"""Small exact linear algebra over Z and Q (ranks are tiny, clarity wins)."""
from __future__ import annotations

from fractions import Fraction


def det(m) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def adjugate(m) -> list[list[int]]:
    """Adjugate of an integer matrix, as integers."""
    n = len(m)
    if n == 0:
        return []
    d = det(m)
    inv = inverse(m)
    out = [[inv[i][j] * d for j in range(n)] for i in range(n)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ArithmeticError("adjugate of an integer matrix must be integral")
    return [[int(x) for x in row] for row in out]


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def congruence(t, g):
    """``t g t^T``: Gram matrix of the vectors given by the rows of ``t``."""
    return matmul(matmul(t, g), transpose(t))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hnf(a) -> tuple[list[list[int]], list[list[int]]]:
    """Lower-triangular ``H = A U`` with ``U`` unimodular and positive diagonal."""
    k = len(a)
    h = [list(row) for row in a]
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def colop(mat, i, j, s, t, p, q):
        # col_i <- s*col_i + t*col_j ; col_j <- p*col_i + q*col_j (old values)
        for row in mat:
            ci, cj = row[i], row[j]
            row[i] = s * ci + t * cj
            row[j] = p * ci + q * cj

    for i in range(k):
        for j in range(i + 1, k):
            if h[i][j] == 0:
                continue
            if h[i][i] == 0:
                for mat in (h, u):
                    for row in mat:
                        row[i], row[j] = row[j], row[i]
                continue
            g, s, t = _xgcd(h[i][i], h[i][j])
            p, q = -h[i][j] // g, h[i][i] // g
            colop(h, i, j, s, t, p, q)
            colop(u, i, j, s, t, p, q)
        if h[i][i] < 0:
            for mat in (h, u):
                for row in mat:
                    row[i] = -row[i]
        if h[i][i] == 0:
            raise ZeroDivisionError("singular matrix")
    return h, u


def row_hnf(rows) -> list[list[int]]:
    """Basis (as rows) of the Z-span of integer row vectors, echelon form."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    basis = []
    col = 0
    while m and col < ncols:
        nz = [r for r in m if r[col] != 0]
        rest = [r for r in m if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        m = rest
        col += 1
    return basis
