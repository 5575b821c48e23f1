"""Pure-Python value enumeration kernels.

Mirror of ``_ckernels.pyx``; see :mod:`qflocal.kernels` for the level plan
both backends consume. Everything is exact integer arithmetic.
"""
from __future__ import annotations

from math import isqrt

NAME = "python"


def _t_range(alpha, beta, gamma, rhs):
    """Integers t with alpha*t^2 + 2*beta*t + gamma <= rhs (alpha > 0)."""
    disc = beta * beta - alpha * (gamma - rhs)
    if disc < 0:
        return 0, -1
    s = isqrt(disc)
    lo = -((beta + s) // alpha)
    while alpha * (lo - 1) * (lo - 1) + 2 * beta * (lo - 1) + gamma <= rhs:
        lo -= 1
    hi = (s - beta) // alpha
    while alpha * (hi + 1) * (hi + 1) + 2 * beta * (hi + 1) + gamma <= rhs:
        hi += 1
    return lo, hi


def _walk(plan, n, h0, c0, bound, k, visit, leaf):
    """Enumerate outer coordinates n-1 .. k; call ``visit(h, c)`` at level k.

    With ``k == 0`` the innermost coordinate is handled by ``leaf(lo, hi, a, b, c)``
    instead, where the values are ``a*t^2 + 2*b*t + c`` for ``lo <= t <= hi``.
    """

    def rec(j, h, c):
        if j == k:
            visit(h, c)
            return
        d, alpha, ajj, a, r, adj = plan[j - 1]
        hb = h[j - 1]
        if j == 1:
            lo, hi = _t_range(ajj, hb, c, bound)
            if lo <= hi:
                leaf(lo, hi, ajj, hb, c)
            return
        ha = h[: j - 1]
        beta = d * hb - sum(x * y for x, y in zip(r, ha))
        quad = 0
        for i, row in enumerate(adj):
            hi_ = ha[i]
            if hi_:
                quad += hi_ * sum(x * y for x, y in zip(row, ha))
        gamma = d * c - quad
        lo, hi = _t_range(alpha, beta, gamma, d * bound)
        for t in range(lo, hi + 1):
            rec(j - 1, [x + t * y for x, y in zip(ha, a)], c + 2 * t * hb + t * t * ajj)

    rec(n, list(h0), c0)


def mark(plan, n, h0, c0, bound) -> int:
    """Bitmask of the values f(x) = x^T G x + 2 h0.x + c0 that are <= bound.

    Values must be nonnegative (the caller shifts ``c0``).
    """
    buf = bytearray(bound + 1)

    def leaf(lo, hi, a, b, c):
        v = a * lo * lo + 2 * b * lo + c
        dv = a * (2 * lo + 1) + 2 * b
        for _ in range(hi - lo + 1):
            buf[v] = 1
            v += dv
            dv += 2 * a

    def visit(h, c):  # k == 0 never reaches visit except for n == 0
        if 0 <= c <= bound:
            buf[c] = 1

    _walk(plan, n, h0, c0, bound, 0, visit, leaf)
    return int.from_bytes(_pack(buf), "little")


def _pack(buf: bytearray) -> bytes:
    import numpy as np

    return np.packbits(np.frombuffer(bytes(buf), dtype=np.uint8), bitorder="little").tobytes()


def fold(plan, n, bound, k, hnf, u, inner, masks, mins) -> int:
    """Union over outer vectors of shifted inner-coset masks (see kernels)."""
    radix = [hnf[i][i] for i in range(k)]
    strides = []
    s = 1
    for m in radix:
        strides.append(s)
        s *= m
    acc = 0

    def visit(h, c):
        nonlocal acc
        hh = list(h)
        y = []
        for i in range(k):
            yi = hh[i] // radix[i]
            if yi:
                for row in range(i, k):
                    hh[row] -= yi * hnf[row][i]
            y.append(yi)
        cls = sum(x * st for x, st in zip(hh, strides))
        z = [sum(uij * yj for uij, yj in zip(row, y)) for row in u]
        zaz = 0
        for i in range(k):
            if z[i]:
                zaz += z[i] * sum(x * y_ for x, y_ in zip(inner[i], z))
        off = c + zaz - 2 * sum(x * y_ for x, y_ in zip(z, h)) + mins[cls]
        if off <= bound:
            acc |= masks[cls] << off

    _walk(plan, n, [0] * n, 0, bound, k, visit, None)
    return acc & ((1 << (bound + 1)) - 1)
