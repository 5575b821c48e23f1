"""Local invariants eta_{p,s}, nu_p, nu'_p, type A, and the escalation data.

For a class s of valuation 0 or 1, eta_{p,s}(L) is the least s*p^(2u) that
L_p represents; nu_{p,s} is its order, nu_p the maximum over the fixed class
representatives and nu'_p the maximum after dropping one argmax s0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .arith import ArithError, SquareClass, _check_prime, is_square, sc_set, square_class, vp
from .jordan import isotropic_diagonal, jordan_decompose
from .lattice import GramLattice, LatticeError, make_lattice
from ._linalg import det, row_hnf
from .localrep import UnsupportedRankError, ramified_primes, represents_local


class TheoremViolation(AssertionError):
    """A relation that the theory guarantees failed on concrete data."""


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def _order_key(v) -> float:
    return float("inf") if v is INFINITE else v


def eta_cap(lat: GramLattice, p: int) -> int:
    return -(-(vp(4 * lat.det, p) + 6) // 2)


def front_anisotropic(lat: GramLattice, p: int) -> bool:
    """For rank 3: whether the ternary space Q_p L is anisotropic."""
    return not isotropic_diagonal(jordan_decompose(lat, p).diagonal(), p)


def eta(lat: GramLattice, p: int, s: SquareClass):
    """Least represented s*p^(2u), or INFINITE for the excluded anisotropic class."""
    _check_prime(p)
    if lat.n < 3:
        raise UnsupportedRankError("eta needs rank >= 3")
    if s not in sc_set(p):
        raise ArithError(f"{s} is not one of the fixed class representatives")
    if lat.n == 3 and front_anisotropic(lat, p) and is_square(-s.value * lat.det, p):
        return INFINITE
    split = jordan_decompose(lat, p)
    for u in range(eta_cap(lat, p) + 1):
        c = s.shift(2 * u)
        if represents_local(split, p, c):
            return c
    raise TheoremViolation(f"eta search exceeded its cap for class {s} at p={p}")


@dataclass(frozen=True)
class LocalProfile:
    prime: int
    table: tuple[tuple[SquareClass, object], ...]
    nu: object
    nu_prime: int
    s0: SquareClass
    type_a: bool = False

    def eta(self, s: SquareClass):
        return dict(self.table)[s]

    def orders(self) -> dict[SquareClass, object]:
        return {s: (INFINITE if e is INFINITE else e.val) for s, e in self.table}

    def to_json(self) -> dict:
        return {
            "eta": {str(s.value): ("inf" if e is INFINITE else int(e.value)) for s, e in self.table},
            "nu": "inf" if self.nu is INFINITE else self.nu,
            "nu_prime": self.nu_prime,
            "s0": int(self.s0.value),
            "type_a": self.type_a,
        }


def _profile_from_table(p: int, table, type_a: bool) -> LocalProfile:
    orders = [(s, INFINITE if e is INFINITE else e.val) for s, e in table]
    top = max(orders, key=lambda t: _order_key(t[1]))[1]
    s0 = next(s for s, o in orders if o == top)
    rest = [o for s, o in orders if s != s0]
    nu_prime = max(rest, key=_order_key)
    if nu_prime is INFINITE:
        raise TheoremViolation("two classes of infinite order")
    return LocalProfile(p, tuple(table), top, nu_prime, s0, type_a)


def nu_profile(lat: GramLattice, p: int) -> LocalProfile:
    _check_prime(p)
    if lat.n < 3:
        raise UnsupportedRankError("profiles need rank >= 3")
    if (2 * lat.det) % p != 0:
        # unimodular of rank >= 3 at p: every p-adic integer is represented
        table = [(s, s) for s in sc_set(p)]
    else:
        table = [(s, eta(lat, p, s)) for s in sc_set(p)]
    type_a = False
    if p == 2 and lat.n >= 4 and jordan_decompose(lat, 2).levels[0].exp == 0:
        type_a = is_type_A(lat)
    return _profile_from_table(p, table, type_a)


def nu_by_counting(lat: GramLattice, p: int) -> tuple[int, int]:
    """(nu, nu') from the counting characterization, for rank >= 4.

    nu is the least r with every p^(r-1)s represented, nu' the least r with
    all but at most one represented.
    """
    if lat.n < 4:
        raise UnsupportedRankError("counting characterization needs rank >= 4")
    split = jordan_decompose(lat, p)
    classes = sc_set(p)
    total = len(classes)
    nu = nu_prime = None
    r = 1
    cap = 2 * eta_cap(lat, p) + 3
    while nu is None:
        if r > cap:
            raise TheoremViolation("counting search exceeded its cap")
        hits = sum(represents_local(split, p, s.shift(r - 1)) for s in classes)
        if nu_prime is None and hits >= total - 1:
            nu_prime = r
        if hits == total:
            nu = r
        r += 1
    return nu, nu_prime


def is_type_A(lat: GramLattice) -> bool:
    """Type A on the computed dyadic splitting."""
    if lat.n < 4:
        raise UnsupportedRankError("type A needs rank >= 4")
    split = jordan_decompose(lat, 2)
    if split.levels[0].exp != 0:
        raise LatticeError("type A needs a lattice primitive at 2")
    levels = split.levels
    rank = 0
    for t in range(1, len(levels)):
        rank += levels[t - 1].rank
        if rank > 3:
            return False
        if rank == 3:
            front = split.diagonal(levels[:t])
            if isotropic_diagonal(front, 2):
                return False
            return levels[t].norm_exp(2) >= levels[t - 1].exp + 3
    return False


def h_set(lat: GramLattice) -> list[tuple[SquareClass, ...]]:
    """All eta tuples over the ramified primes, duplicates collapsed, in order."""
    if lat.n < 4:
        raise UnsupportedRankError("H(L) needs rank >= 4")
    primes = ramified_primes(lat)
    tables = []
    for p in primes:
        prof = nu_profile(lat, p)
        col = []
        for _, e in prof.table:
            if e is INFINITE:
                raise UnsupportedRankError("infinite entry in a rank >= 4 profile")
            if e not in col:
                col.append(e)
        tables.append(col)
    return list(itertools.product(*tables))


def s_eta_contains(etas: Sequence[SquareClass], n: int) -> bool:
    """n lies in S_eta: same order and unit-square quotient at each prime of eta."""
    if n < 1:
        return False
    for e in etas:
        if square_class(n, e.prime) != e:
            return False
    return True


@dataclass(frozen=True)
class EtaRecord:
    eta: tuple[SquareClass, ...]
    e_eta: tuple[int, ...]
    kappa: dict[int, int]
    m: int
    eta_prime: tuple[SquareClass, ...]


@dataclass(frozen=True)
class EscalationData:
    primes: tuple[int, ...]
    profiles: dict[int, LocalProfile]
    e: tuple[int, ...]
    xi: dict[int, SquareClass]
    records: tuple[EtaRecord, ...] = field(repr=False)

    @property
    def h(self) -> list[tuple[SquareClass, ...]]:
        return [r.eta for r in self.records]

    def record(self, etas) -> EtaRecord:
        for r in self.records:
            if r.eta == tuple(etas):
                return r
        raise KeyError(etas)

    def to_json(self) -> dict:
        return {
            "primes": list(self.primes),
            "E": list(self.e),
            "xi": {str(p): int(c.value) for p, c in self.xi.items()},
            "m_values": sorted({r.m for r in self.records}),
            "h_size": len(self.records),
        }


def _check_chain(nu: int, nu_prime: int, kappa: int) -> None:
    chain = [2, nu_prime + 1, nu - 3, 2 * kappa, nu - 2]
    if any(a > b for a, b in zip(chain, chain[1:])):
        raise TheoremViolation(f"inequality chain fails: {chain}")


def escalation_data(lat: GramLattice) -> EscalationData:
    if lat.n < 4:
        raise UnsupportedRankError("escalation data needs rank >= 4")
    primes = tuple(ramified_primes(lat))
    profiles = {p: nu_profile(lat, p) for p in primes}
    e = tuple(p for p in primes if profiles[p].nu_prime + 3 < profiles[p].nu)
    xi = {p: profiles[p].s0.shift(2) for p in e}
    records = []
    seen = {}
    for etas in h_set(lat):
        e_eta = tuple(p for p, c in zip(primes, etas) if p in xi and c.val == profiles[p].nu)
        kappa = {}
        for p, c in zip(primes, etas):
            if p not in e_eta:
                continue
            diff = c.val - xi[p].val
            if diff % 2 or c.unit != xi[p].unit:
                raise TheoremViolation(f"eta_{p} = {c} is not an even power of p times xi = {xi[p]}")
            kappa[p] = diff // 2
            _check_chain(profiles[p].nu, profiles[p].nu_prime, kappa[p])
        m = prod(p ** k for p, k in kappa.items())
        eta_prime = tuple(xi[p] if p in e_eta else c for p, c in zip(primes, etas))
        if eta_prime in seen:
            raise TheoremViolation(f"eta' not injective: {seen[eta_prime]} and {etas}")
        seen[eta_prime] = etas
        records.append(EtaRecord(tuple(etas), e_eta, kappa, m, eta_prime))
    return EscalationData(primes, profiles, e, xi, tuple(records))


def rescaled_sublattice(lat: GramLattice, m: int, xs: Sequence[Sequence[int]]) -> GramLattice:
    """Lattice spanned by x/m for the given vectors, as an integral Gram matrix."""
    if not xs:
        raise ArithError("need at least one vector")
    if m < 1:
        raise ArithError("m must be positive")
    m2 = m * m
    xs = [list(x) for x in xs]
    for x in xs:
        for y in xs:
            if lat.b(x, y) % m2:
                raise TheoremViolation(f"B({x}, {y}) is not divisible by {m2}")
    basis = xs
    gram = [[lat.b(x, y) for y in basis] for x in basis]
    if det(gram) == 0:
        basis = row_hnf(xs)
        gram = [[lat.b(x, y) for y in basis] for x in basis]
    return make_lattice([[Fraction(v, m2) for v in row] for row in gram])
