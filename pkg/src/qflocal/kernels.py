"""Exact bounded value-set enumeration, with a compiled backend when built.

The enumerator walks coordinates from the last to the first, bounding each
coordinate by the exact minimum of the form over the remaining (real)
coordinates.  Scaling that minimum by the leading principal minor keeps every
quantity an integer, so ranges come from :func:`math.isqrt` and no vector is
ever missed.

For rank >= 3 the innermost ``k`` coordinates are not enumerated per outer
vector.  Writing ``x = (u, w)`` with ``A`` the inner Gram block, the values
over ``u`` for fixed ``w`` form ``V(Cw) + w^T D w`` where
``V(h) = {u^T A u + 2 u^T h}``, and ``V(h)`` only depends on ``h`` modulo
``A Z^k`` up to an integer shift.  One bitmask per class (``det A`` of them)
is precomputed, and each outer vector contributes one shifted OR.

Set ``QFLOCAL_PURE=1`` to force the pure-Python backend.
"""
from __future__ import annotations

import itertools
import os
from fractions import Fraction
from math import isqrt

from . import _pykernels
from ._linalg import adjugate, column_hnf, det, inverse

_LIMIT = 1 << 60

try:
    if os.environ.get("QFLOCAL_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _compiled
except ImportError:  # pragma: no cover - depends on build
    _compiled = None

backend = _compiled if _compiled is not None else _pykernels
BACKEND = backend.NAME


def available_backends() -> dict:
    out = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def make_plan(g):
    """Per-level integer data for the outer-to-inner walk."""
    n = len(g)
    plan = []
    for j in range(1, n + 1):
        sub = [row[: j - 1] for row in g[: j - 1]]
        d = det(sub) if j > 1 else 1
        adj = adjugate(sub) if j > 1 else []
        a = [g[i][j - 1] for i in range(j - 1)]
        r = [sum(a[i] * adj[i][col] for i in range(j - 1)) for col in range(j - 1)]
        alpha = det([row[:j] for row in g[:j]])
        plan.append((int(d), int(alpha), g[j - 1][j - 1], a, r, adj))
    return plan


def _fits(g, plan, h0, c0, bound) -> bool:
    """Conservative check that the compiled backend's int64 state cannot overflow."""
    n = len(g)
    inv = inverse(g)
    delta = [sum(inv[i][l] * h0[l] for l in range(n)) for i in range(n)]
    radius = bound - c0 + sum(h * dl for h, dl in zip(h0, delta))
    if radius < 0:
        return True
    xmax = []
    for i in range(n):
        q = radius * inv[i][i]
        xmax.append(abs(delta[i]) + isqrt(int(q.numerator // q.denominator) + 1) + 2)
    gmax = max(abs(x) for row in g for x in row)
    hmax = max((abs(x) for x in h0), default=0) + n * gmax * max(xmax)
    cmax = abs(c0) + 2 * n * hmax * max(xmax) + n * n * gmax * max(xmax) ** 2
    dmax = max(p[0] for p in plan)
    adjmax = max((abs(x) for p in plan for row in p[5] for x in row), default=1)
    rmax = max((abs(x) for p in plan for x in p[4]), default=1)
    worst = max(
        dmax * cmax + n * n * adjmax * hmax * hmax,
        dmax * hmax + n * rmax * hmax,
        dmax * (bound + abs(c0)),
        cmax,
    )
    return int(worst) < _LIMIT


def mark_values(g, bound: int, h0=None, c0: int = 0, impl=None) -> int:
    """Bitmask of ``x^T g x + 2 h0.x + c0`` over all integer x, up to ``bound``.

    The caller guarantees the expression is nonnegative everywhere.
    """
    n = len(g)
    h0 = list(h0) if h0 is not None else [0] * n
    impl = impl or backend
    if bound < 0:
        return 0
    plan = make_plan(g)
    if impl is not _pykernels and not _fits(g, plan, h0, c0, bound):
        impl = _pykernels
    return impl.mark(plan, n, h0, c0, bound)


def _min_value(a, h) -> int:
    """Exact minimum of u^T a u + 2 u.h over integer u."""
    inv = inverse(a)
    k = len(a)
    real_min = -sum(h[i] * inv[i][j] * h[j] for i in range(k) for j in range(k))
    lo = real_min.numerator // real_min.denominator
    width = 2
    while True:
        m = mark_values(a, width, h0=h, c0=-lo)
        if m:
            return lo + ((m & -m).bit_length() - 1)
        width *= 2


def components(g) -> list[list[int]]:
    """Index sets of the orthogonal blocks of a Gram matrix."""
    n = len(g)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and g[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        out.append(sorted(comp))
    return out


def sumset(a: int, b: int, bound: int) -> int:
    """Bitmask sumset {x + y} truncated to [0, bound]."""
    full = (1 << (bound + 1)) - 1
    if a.bit_count() > b.bit_count():
        a, b = b, a
    acc = 0
    while a:
        low = a & -a
        shift = low.bit_length() - 1
        if shift > bound:
            break
        acc |= b << shift
        a ^= low
    return acc & full


def inner_size(rank: int) -> int:
    if rank <= 2:
        return 0
    return 2 if rank <= 4 else 3


def _block_mask(g, bound, impl=None) -> int:
    n = len(g)
    k = inner_size(n)
    if k == 0:
        return mark_values(g, bound, impl=impl)
    inner = min(
        itertools.combinations(range(n), k),
        key=lambda s: det([[g[i][j] for j in s] for i in s]),
    )
    order = list(inner) + [i for i in range(n) if i not in inner]
    gp = [[g[i][j] for j in order] for i in order]
    a = [row[:k] for row in gp[:k]]
    hnf, u = column_hnf(a)
    radix = [hnf[i][i] for i in range(k)]
    masks, mins = [], []
    # class index is mixed radix with the first coordinate least significant
    for rev in itertools.product(*[range(m) for m in reversed(radix)]):
        hbar = list(reversed(rev))
        m = _min_value(a, hbar)
        mins.append(m)
        masks.append(mark_values(a, bound, h0=hbar, c0=-m, impl=impl))
    plan = make_plan(gp)
    impl = impl or backend
    if impl is not _pykernels and not _fits(gp, plan, [0] * n, 0, bound):
        impl = _pykernels
    return impl.fold(plan, n, bound, k, hnf, u, a, masks, mins)


def value_mask(g, bound: int, impl=None) -> int:
    """Bitmask (bit 0 included) of all values Q(x) <= bound of the Gram matrix g."""
    if bound < 0:
        return 0
    acc = 1
    for comp in components(g):
        sub = [[g[i][j] for j in comp] for i in comp]
        acc = sumset(acc, _block_mask(sub, bound, impl=impl), bound)
    return acc


def mask_to_list(mask: int, start: int = 1) -> list[int]:
    bits = bin(mask >> start)[:1:-1]
    return [i + start for i, ch in enumerate(bits) if ch == "1"]
