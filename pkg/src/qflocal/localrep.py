"""Exact local representation over Z_p.

The image of Q on L_p modulo p^W is the iterated sumset of the images of
the Jordan blocks.  Residue information decides membership exactly: if
ord(a) = v and b = Q(x) is congruent to a modulo p^(v+sigma), with sigma = 1
for odd p and 3 for p = 2, then a/b is a unit square t^2 and a = Q(tx).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .arith import ArithError, SquareClass, _check_prime, square_class, unit_classes, vp
from .jordan import BLOCK_H, UNIT, Block, JordanSplitting, jordan_decompose
from .lattice import GramLattice


class UnsupportedRankError(ValueError):
    """Operation needs a larger rank."""


def sigma(p: int) -> int:
    return 3 if p == 2 else 1


@dataclass(frozen=True)
class ClassSet:
    """Represented square classes with valuation at most ``cap``."""

    prime: int
    cap: int
    classes: frozenset[SquareClass]

    def __contains__(self, c: SquareClass) -> bool:
        return c in self.classes

    def sorted(self) -> list[SquareClass]:
        return sorted(self.classes, key=lambda c: (c.val, c.rep))


def _square_residues(mod: int) -> np.ndarray:
    c = np.arange(mod, dtype=np.int64)
    return (c * c) % mod


def _block_array(exp: int, block: Block, p: int, w: int) -> np.ndarray:
    mod = p**w
    out = np.zeros(mod, dtype=bool)
    out[0] = True
    if exp >= w:
        return out
    step = p**exp
    if block.kind == UNIT:
        sq = _square_residues(mod)
        out[(sq * ((block.unit.rep * step) % mod)) % mod] = True
    elif block.kind == BLOCK_H:
        out[:: 2 * step] = True
    else:
        # 2^(e+1) times an element of even order, any odd unit part
        k = exp + 1
        while k < w:
            r = np.arange(1 << (w - k), dtype=np.int64)
            r = r[r % 2 == 1]
            out[(r << k) % mod] = True
            k += 2
    return out


def block_value_residues(exp: int, block: Block, p: int, w: int) -> frozenset[int]:
    """Image of Q on ``p^exp * block`` modulo ``p^w`` (zero included)."""
    _check_prime(p)
    if w < 1:
        raise ArithError("modulus exponent must be positive")
    if block.kind != UNIT and p != 2:
        raise ArithError("even planes only occur at p = 2")
    return frozenset(int(i) for i in np.flatnonzero(_block_array(exp, block, p, w)))


def cyclic_sumset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """{x + y mod N} for boolean indicator arrays of length N."""
    n = len(a)
    if a.sum() == 1 and a[0]:
        return b.copy()
    if b.sum() == 1 and b[0]:
        return a.copy()
    if n <= 64:
        out = np.zeros(n, dtype=bool)
        for x in np.flatnonzero(a):
            out |= np.roll(b, x)
        return out
    fa = np.fft.rfft(a.astype(np.float64))
    fb = np.fft.rfft(b.astype(np.float64))
    conv = np.fft.irfft(fa * fb, n)
    return conv > 0.5


@lru_cache(maxsize=512)
def _image(split: JordanSplitting, w: int) -> np.ndarray:
    p = split.prime
    acc = None
    for exp, block in split.blocks():
        if exp >= w:
            continue
        arr = _block_array(exp, block, p, w)
        acc = arr if acc is None else cyclic_sumset(acc, arr)
    if acc is None:
        acc = np.zeros(p**w, dtype=bool)
        acc[0] = True
    acc.setflags(write=False)
    return acc


def value_residues(split: JordanSplitting, w: int) -> frozenset[int]:
    """Image of Q(L_p) modulo ``p^w``."""
    if w < 1:
        raise ArithError("modulus exponent must be positive")
    return frozenset(int(i) for i in np.flatnonzero(_image(split, w)))


def _splitting(lat, p: int) -> JordanSplitting:
    if isinstance(lat, JordanSplitting):
        if lat.prime != p:
            raise ArithError("splitting is for a different prime")
        return lat
    return jordan_decompose(lat, p)


def _class_value(c: SquareClass) -> int:
    if c.val < 0:
        raise ArithError("class is not integral")
    return c.unit.rep * c.prime**c.val


def represents_local(lat: GramLattice | JordanSplitting, p: int, a: int | SquareClass) -> bool:
    """Whether ``a`` lies in Q(L_p)."""
    _check_prime(p)
    if isinstance(a, SquareClass):
        a = _class_value(a)
    if a == 0:
        raise ArithError("zero is always represented; ask about a nonzero value")
    if vp(a, p) < 0:
        return False
    split = _splitting(lat, p)
    w = vp(a, p) + sigma(p)
    return bool(_image(split, w)[a % p**w])


def local_classes(lat: GramLattice | JordanSplitting, p: int, cap: int) -> ClassSet:
    split = _splitting(lat, p)
    found = set()
    for v in range(cap + 1):
        for u in unit_classes(p):
            c = SquareClass(p, v, u)
            if represents_local(split, p, c):
                found.add(c)
    return ClassSet(p, cap, frozenset(found))


def ramified_primes(lat: GramLattice) -> list[int]:
    from sympy import factorint

    return sorted(int(p) for p in factorint(2 * lat.det))


def genus_represents(lat: GramLattice, n: int) -> bool:
    """Whether n is represented by L_p for every p (rank at least 3)."""
    if lat.n < 3:
        raise UnsupportedRankError("genus representation needs rank >= 3")
    if n < 1:
        raise ArithError("n must be positive")
    return all(represents_local(lat, p, n) for p in ramified_primes(lat))


class GenusOracle:
    """Memoized genus membership keyed by the square class of n at each prime."""

    def __init__(self, lat: GramLattice):
        if lat.n < 3:
            raise UnsupportedRankError("genus representation needs rank >= 3")
        self.lattice = lat
        self.primes = ramified_primes(lat)
        self._splits = {p: jordan_decompose(lat, p) for p in self.primes}
        self._memo: dict[tuple[int, SquareClass], bool] = {}

    def local(self, p: int, n: int) -> bool:
        key = (p, square_class(n, p))
        hit = self._memo.get(key)
        if hit is None:
            hit = represents_local(self._splits[p], p, n)
            self._memo[key] = hit
        return hit

    def __call__(self, n: int) -> bool:
        return all(self.local(p, n) for p in self.primes)

    def members(self, ns: Iterable[int]) -> list[int]:
        return [n for n in ns if self(n)]
