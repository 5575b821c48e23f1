"""Positive definite integral lattices given by Gram matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, isqrt
from typing import Iterator, Sequence

from sympy import isprime

from . import kernels
from ._linalg import congruence, det, inverse


class LatticeError(ValueError):
    """Malformed lattice input."""


class DefinitenessError(LatticeError):
    """Gram matrix is not positive definite."""


class DegenerateSublatticeError(LatticeError):
    """Basis change with zero determinant."""


def _as_matrix(gram) -> tuple[tuple[int, ...], ...]:
    rows = [list(r) for r in gram]
    n = len(rows)
    if n == 0:
        raise LatticeError("empty Gram matrix")
    out = []
    for r in rows:
        if len(r) != n:
            raise LatticeError("Gram matrix must be square")
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                if hasattr(x, "denominator") and x.denominator == 1:
                    x = int(x)
                else:
                    raise LatticeError(f"non-integer Gram entry {x!r}")
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class GramLattice:
    """A Z-lattice with a fixed basis; ``gram[i][j] = B(e_i, e_j)``."""

    gram: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return int(det([list(r) for r in self.gram]))

    @cached_property
    def scale(self) -> int:
        g = 0
        for row in self.gram:
            for x in row:
                g = gcd(g, x)
        return g

    @cached_property
    def norm(self) -> int:
        g = 2 * self.scale
        for i in range(self.n):
            g = gcd(g, self.gram[i][i])
        return g

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def q(self, x: Sequence[int]) -> int:
        return self.b(x, x)

    def b(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.n) for j in range(self.n) if x[i] and y[j])

    def __str__(self):
        return self.name or f"gram:{[list(r) for r in self.gram]}"


def make_lattice(gram, name: str | None = None) -> GramLattice:
    g = _as_matrix(gram)
    n = len(g)
    for i in range(n):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise LatticeError("Gram matrix is not symmetric")
    for k in range(1, n + 1):
        if det([list(r[:k]) for r in g[:k]]) <= 0:
            raise DefinitenessError(f"leading minor of size {k} is not positive")
    return GramLattice(g, name)


def diagonal(*entries: int, name: str | None = None) -> GramLattice:
    n = len(entries)
    return make_lattice([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], name)


def ortho_sum(a: GramLattice, b: GramLattice) -> GramLattice:
    n, m = a.n, b.n
    g = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        g[i][:n] = a.gram[i]
    for i in range(m):
        g[n + i][n:] = b.gram[i]
    return make_lattice(g)


def rescale(lat: GramLattice, c: int) -> GramLattice:
    if c <= 0:
        raise LatticeError("rescaling factor must be positive")
    return make_lattice([[c * x for x in r] for r in lat.gram])


def sublattice(lat: GramLattice, t) -> GramLattice:
    """Sublattice whose basis vectors are the rows of ``t`` (old coordinates)."""
    t = [list(r) for r in t]
    if len(t) != lat.n or any(len(r) != lat.n for r in t):
        raise LatticeError("basis change must be n x n")
    if det(t) == 0:
        raise DegenerateSublatticeError("basis change has zero determinant")
    return make_lattice(congruence(t, lat.matrix()))


@dataclass(frozen=True)
class RepSet:
    """Values of a lattice in ``[1, bound]``."""

    bound: int
    values: tuple[int, ...]
    lattice: GramLattice | None = field(default=None, compare=False, repr=False)

    def __contains__(self, n: int) -> bool:
        if not 1 <= n <= self.bound:
            return False
        return n in self._members

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @cached_property
    def counts(self) -> dict[int, int]:
        """Number of representing vectors up to sign (computed on first access)."""
        if self.lattice is None:
            raise LatticeError("counts need the source lattice")
        out = dict.fromkeys(self.values, 0)
        for _, v in short_vectors(self.lattice, self.bound):
            out[v] += 1
        return out


def value_mask(lat: GramLattice, bound: int) -> int:
    """Bitmask of the represented integers in ``[0, bound]`` (bit 0 always set)."""
    return kernels.value_mask(lat.matrix(), bound)


def enumerate_values(lat: GramLattice, bound: int) -> RepSet:
    if bound < 1:
        return RepSet(max(bound, 0), (), lat)
    vals = kernels.mask_to_list(value_mask(lat, bound), start=1)
    return RepSet(bound, tuple(vals), lat)


def _canonical(x: tuple[int, ...]) -> bool:
    for c in x:
        if c:
            return c > 0
    return False


def _walk_vectors(lat: GramLattice, bound: int, target: int | None = None):
    """All x != 0 with Q(x) <= bound (or Q(x) == target), both signs."""
    g = lat.matrix()
    n = lat.n
    plan = kernels.make_plan(g)
    top = bound if target is None else target
    x = [0] * n

    def rec(j, h, c):
        d, alpha, ajj, a, r, adj = plan[j - 1]
        hb = h[j - 1]
        if j == 1:
            if target is None:
                lo, hi = kernels._pykernels._t_range(ajj, hb, c, top)
                for t in range(lo, hi + 1):
                    x[0] = t
                    yield tuple(x), ajj * t * t + 2 * hb * t + c
                return
            # solve ajj t^2 + 2 hb t + c = target directly
            disc = hb * hb - ajj * (c - target)
            if disc < 0:
                return
            s = isqrt(disc)
            if s * s != disc:
                return
            for num in sorted({-hb - s, -hb + s}):
                if num % ajj == 0:
                    x[0] = num // ajj
                    yield tuple(x), target
            return
        ha = h[: j - 1]
        beta = d * hb - sum(u * v for u, v in zip(r, ha))
        quad = sum(ha[i] * sum(u * v for u, v in zip(row, ha)) for i, row in enumerate(adj) if ha[i])
        lo, hi = kernels._pykernels._t_range(alpha, beta, d * c - quad, d * top)
        for t in range(lo, hi + 1):
            x[j - 1] = t
            yield from rec(j - 1, [u + t * v for u, v in zip(ha, a)], c + 2 * t * hb + t * t * ajj)
        x[j - 1] = 0

    for vec, val in rec(n, [0] * n, 0):
        if any(vec):
            yield vec, val


def short_vectors(lat: GramLattice, bound: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Pairs (x, Q(x)) with 0 < Q(x) <= bound, one x per sign pair."""
    for vec, val in _walk_vectors(lat, bound):
        if _canonical(vec):
            yield vec, val


def vectors_with_value(lat: GramLattice, n: int) -> list[tuple[int, ...]]:
    """All x with Q(x) == n, one per sign pair, sorted."""
    if n < 1:
        return []
    return sorted(v for v, _ in _walk_vectors(lat, n, target=n) if _canonical(v))


def index_p_sublattices(lat: GramLattice, q: int) -> Iterator[GramLattice]:
    """The sublattices of prime index q, one per hyperplane of L/qL.

    A hyperplane is the kernel of a functional c with last nonzero entry
    c_k = 1.  Pivots are visited from the last coordinate down.
    """
    if not isprime(q):
        raise LatticeError(f"{q} is not prime")
    n = lat.n
    g = lat.matrix()
    for k in range(n - 1, -1, -1):
        for free in itertools.product(range(q), repeat=k):
            t = []
            for i in range(n):
                row = [0] * n
                if i == k:
                    row[k] = q
                else:
                    row[i] = 1
                    if i < k:
                        row[k] = (-free[i]) % q
                t.append(row)
            yield GramLattice(tuple(tuple(r) for r in congruence(t, g)), None)


def min_eigen_box(lat: GramLattice, bound: int) -> list[int]:
    """Coordinate bounds |x_i| <= floor(sqrt(bound * (G^-1)_ii)) for Q(x) <= bound."""
    inv = inverse(lat.matrix())
    out = []
    for i in range(lat.n):
        q = bound * inv[i][i]
        out.append(isqrt(q.numerator // q.denominator))
    return out
