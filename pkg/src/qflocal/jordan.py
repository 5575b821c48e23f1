"""Jordan splittings of L_p and Hasse/isotropy data of the ambient Q_p-space.

Elimination runs over rationals whose denominators are prime to p, so every
splitting is exact; no p-adic precision is ever chosen.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import ArithError, UnitClass, _check_prime, hilbert, is_square, unit_class, vp
from .lattice import GramLattice

UNIT, BLOCK_A, BLOCK_H = "U", "A", "H"


@dataclass(frozen=True, order=True)
class Block:
    """One orthogonal summand of a Jordan component.

    ``UNIT`` carries a unit class; ``BLOCK_A``/``BLOCK_H`` are the even
    unimodular dyadic planes [[2,1],[1,2]] and [[0,1],[1,0]].
    """

    kind: str
    unit: UnitClass | None = None

    @property
    def rank(self) -> int:
        return 1 if self.kind == UNIT else 2

    def label(self) -> str:
        return f"u{self.unit.rep}" if self.kind == UNIT else self.kind

    def diagonal(self, e: int, p: int) -> list[Fraction]:
        """Rational diagonal entries of ``p^e`` times this block."""
        s = Fraction(p) ** e
        if self.kind == UNIT:
            return [s * self.unit.rep]
        if self.kind == BLOCK_A:
            # 2(x^2+xy+y^2) = 2(x+y/2)^2 + (3/2)y^2
            return [2 * s, s * Fraction(3, 2)]
        return [2 * s, -2 * s]

    def det(self) -> int:
        if self.kind == UNIT:
            return self.unit.rep
        return 3 if self.kind == BLOCK_A else -1


@dataclass(frozen=True)
class JordanLevel:
    exp: int
    blocks: tuple[Block, ...]

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    def norm_exp(self, p: int) -> int:
        """Order of the norm ideal of this component."""
        if p != 2 or any(b.kind == UNIT for b in self.blocks):
            return self.exp
        return self.exp + 1


@dataclass(frozen=True)
class JordanSplitting:
    prime: int
    levels: tuple[JordanLevel, ...]

    @property
    def rank(self) -> int:
        return sum(lv.rank for lv in self.levels)

    def blocks(self):
        for lv in self.levels:
            for b in lv.blocks:
                yield lv.exp, b

    def diagonal(self, levels: Sequence[JordanLevel] | None = None) -> list[Fraction]:
        out = []
        for lv in self.levels if levels is None else levels:
            for b in lv.blocks:
                out.extend(b.diagonal(lv.exp, self.prime))
        return out

    def to_json(self) -> list[dict]:
        return [{"exp": lv.exp, "blocks": [b.label() for b in lv.blocks]} for lv in self.levels]

    def __str__(self):
        parts = []
        for lv in self.levels:
            parts.append(f"{self.prime}^{lv.exp}:" + ",".join(b.label() for b in lv.blocks))
        return " | ".join(parts)


@dataclass(frozen=True)
class DiagonalSpace:
    """Rational diagonalization ``T G T^T = diag(entries)``."""

    entries: tuple[Fraction, ...]
    witness: tuple[tuple[Fraction, ...], ...]


def _pval(x: Fraction, p: int) -> int | None:
    return None if x == 0 else vp(x, p)


def _split(m: list[list[Fraction]], p: int) -> list[tuple[int, Block]]:
    out: list[tuple[int, Block]] = []
    while m:
        n = len(m)
        best = None
        for i in range(n):
            for j in range(i, n):
                v = _pval(m[i][j], p)
                if v is None:
                    continue
                # prefer diagonal entries at the minimal order
                key = (v, 0 if i == j else 1, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            raise ArithError("degenerate form")
        (v, offdiag, _, _), i, j = best
        if offdiag and p != 2:
            # x_i -> x_i + x_j makes the (i,i) entry have order v
            for r in range(n):
                m[r][i] += m[r][j]
            for r in range(n):
                m[i][r] += m[j][r]
            offdiag = 0
        if not offdiag:
            piv = m[i][i]
            out.append((v, Block(UNIT, unit_class(piv / Fraction(p) ** v, p))))
            rest = [r for r in range(n) if r != i]
            m = [[m[a][b] - m[a][i] * m[i][b] / piv for b in rest] for a in rest]
            continue
        a, b, d = m[i][i], m[i][j], m[j][j]
        dt = a * d - b * b
        w = Fraction(4) ** v
        r8 = int((-dt / w).numerator * pow((-dt / w).denominator, -1, 8) % 8)
        kind = BLOCK_H if r8 == 1 else BLOCK_A
        if r8 not in (1, 5):
            raise ArithError("unexpected dyadic plane")
        out.append((v, Block(kind)))
        rest = [r for r in range(n) if r not in (i, j)]
        # Schur complement of the 2x2 block
        inv = ((d / dt, -b / dt), (-b / dt, a / dt))
        new = []
        for x in rest:
            row = []
            cx = (m[x][i], m[x][j])
            for y in rest:
                cy = (m[i][y], m[j][y])
                corr = sum(cx[s] * inv[s][t] * cy[t] for s in range(2) for t in range(2))
                row.append(m[x][y] - corr)
            new.append(row)
        m = new
    return out


def _group(p: int, blocks: list[tuple[int, Block]]) -> JordanSplitting:
    levels: dict[int, list[Block]] = {}
    for e, b in blocks:
        levels.setdefault(e, []).append(b)
    return JordanSplitting(p, tuple(JordanLevel(e, tuple(sorted(levels[e]))) for e in sorted(levels)))


@lru_cache(maxsize=4096)
def _decompose(gram: tuple[tuple[int, ...], ...], p: int) -> JordanSplitting:
    m = [[Fraction(x) for x in row] for row in gram]
    return _group(p, _split(m, p))


def jordan_decompose(lat: GramLattice, p: int) -> JordanSplitting:
    _check_prime(p)
    return _decompose(lat.gram, p)


def splitting_from_blocks(p: int, blocks: Sequence[tuple[int, Block]]) -> JordanSplitting:
    return _group(p, list(blocks))


def rational_diagonalize(lat: GramLattice | Sequence[Sequence[int]]) -> DiagonalSpace:
    g = lat.matrix() if isinstance(lat, GramLattice) else [list(r) for r in lat]
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
                t[k], t[j] = t[j], t[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    raise ArithError("degenerate form")
                for r in range(n):
                    m[r][k] += m[r][j]
                for r in range(n):
                    m[k][r] += m[j][r]
                t[k] = [x + y for x, y in zip(t[k], t[j])]
        piv = m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
                for r in range(n):
                    m[r][i] -= f * m[r][k]
                t[i] = [x - f * y for x, y in zip(t[i], t[k])]
    return DiagonalSpace(tuple(m[i][i] for i in range(n)), tuple(tuple(r) for r in t))


def hasse_diagonal(entries: Sequence[Fraction], p: int) -> int:
    s = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            s *= hilbert(entries[i], entries[j], p)
    return s


def isotropic_diagonal(entries: Sequence[Fraction], p: int) -> bool:
    """Isotropy over Q_p of the diagonal space with the given entries."""
    n = len(entries)
    if n == 0:
        raise ArithError("rank 0 space")
    if n == 1:
        return False
    d = Fraction(1)
    for a in entries:
        d *= a
    if n == 2:
        return is_square(-d, p)
    h = hasse_diagonal(entries, p)
    if n == 3:
        return h == hilbert(-1, -d, p)
    if n == 4:
        return not (is_square(d, p) and h == -hilbert(-1, -1, p))
    return True


def hasse(lat: GramLattice, p: int) -> int:
    _check_prime(p)
    return hasse_diagonal(rational_diagonalize(lat).entries, p)


def is_isotropic(lat: GramLattice, p: int) -> bool:
    _check_prime(p)
    return isotropic_diagonal(rational_diagonalize(lat).entries, p)
