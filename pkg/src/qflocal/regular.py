"""Bounded global scans: regularity, new-ness, and the eta-structure identity.

All verdicts are statements up to the stated bound; "pass" never means
a proof of regularity and "candidate-new" never means a proof of new-ness.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable

from sympy import primerange

from . import kernels
from .arith import sc_set, square_class
from .invariants import (
    INFINITE,
    TheoremViolation,
    escalation_data,
    front_anisotropic,
    h_set,
    is_type_A,
    nu_by_counting,
    nu_profile,
    rescaled_sublattice,
)
from .jordan import jordan_decompose
from .lattice import (
    DefinitenessError,
    GramLattice,
    diagonal,
    enumerate_values,
    index_p_sublattices,
    make_lattice,
    sublattice,
    value_mask,
    vectors_with_value,
)
from .localrep import GenusOracle, UnsupportedRankError, local_classes, ramified_primes

VERDICTS = ("pass", "witness", "not-new", "candidate-new")


@dataclass
class ScanReport:
    kind: str
    name: str
    params: dict
    verdict: str
    witnesses: list = field(default_factory=list)
    profiles: dict = field(default_factory=dict)
    jordan: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in ("name", "kind", "params", "verdict", "witnesses", "profiles", "jordan")}

    @property
    def ok(self) -> bool:
        return self.verdict in ("pass", "candidate-new")


def _full(bound: int) -> int:
    return (1 << (bound + 1)) - 1


def _label(lat: GramLattice) -> str:
    return lat.name or str(lat)


def regularity_scan(lat: GramLattice, bound: int) -> ScanReport:
    if lat.n < 3:
        raise UnsupportedRankError("regularity scans need rank >= 3")
    mask = value_mask(lat, bound)
    oracle = GenusOracle(lat)
    missing = kernels.mask_to_list(~mask & _full(bound), start=1)
    witness = next((n for n in missing if oracle(n)), None)
    params = {"bound": bound}
    if witness is None:
        return ScanReport("regularity", _label(lat), params, "pass")
    return ScanReport("regularity", _label(lat), params, "witness", [witness])


def _equal_values(sub: GramLattice, target: int, bound: int, start: int = 64) -> bool:
    b = min(start, bound)
    while True:
        if value_mask(sub, b) != target & _full(b):
            return False
        if b == bound:
            return True
        b = min(2 * b, bound)


def newness_scan(lat: GramLattice, bound: int, pmax: int = 5) -> ScanReport:
    target = value_mask(lat, bound)
    params = {"bound": bound, "pmax": pmax}
    tried = 0
    for q in primerange(2, pmax + 1):
        for sub in index_p_sublattices(lat, q):
            tried += 1
            if _equal_values(sub, target, bound):
                params["sublattices_tried"] = tried
                wit = {"index": int(q), "sublattice": [list(r) for r in sub.gram]}
                return ScanReport("newness", _label(lat), params, "not-new", [wit])
    params["sublattices_tried"] = tried
    return ScanReport("newness", _label(lat), params, "candidate-new")


def structure_rhs(lat: GramLattice, bound: int) -> list[int]:
    """Integers u^2 v <= bound with v in the union of the S_eta, eta in H(L)."""
    primes = ramified_primes(lat)
    etas = set(h_set(lat))
    out = []
    for n in range(1, bound + 1):
        u = 1
        while u * u <= n:
            if n % (u * u) == 0:
                v = n // (u * u)
                if tuple(square_class(v, p) for p in primes) in etas:
                    out.append(n)
                    break
            u += 1
    return out


def q_structure_check(lat: GramLattice, bound: int, gap_limit: int = 50) -> ScanReport:
    if lat.n < 4:
        raise UnsupportedRankError("structure check needs rank >= 4")
    rhs = structure_rhs(lat, bound)
    genus = GenusOracle(lat).members(range(1, bound + 1))
    values = list(enumerate_values(lat, bound).values)
    regular = regularity_scan(lat, bound).verdict == "pass"
    gap = sorted(set(genus) - set(values))
    eq_genus = rhs == genus
    eq_values = (rhs == values) if regular else None
    params = {
        "bound": bound,
        "rhs_size": len(rhs),
        "rhs_equals_genus": eq_genus,
        "regular_up_to_bound": regular,
        "rhs_equals_values": eq_values,
        "gap": gap[:gap_limit],
        "gap_size": len(gap),
    }
    ok = eq_genus and (eq_values is not False)
    witnesses = [] if ok else sorted(set(rhs) ^ set(genus if not eq_genus else values))[:gap_limit]
    return ScanReport("structure", _label(lat), params, "pass" if ok else "witness", witnesses)


# --- seeded lemma suites --------------------------------------------------


def random_gram(rng: random.Random, n: int, spread: int = 2, boost: int = 3) -> GramLattice:
    while True:
        m = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        g = [
            [sum(m[k][i] * m[k][j] for k in range(n)) + (rng.randint(1, boost) if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        try:
            return make_lattice(g)
        except DefinitenessError:
            continue


def random_unimodular(rng: random.Random, n: int, span: int = 3) -> list[list[int]]:
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-span, span)
        t[i] = [a + c * b for a, b in zip(t[i], t[j])]
        if max(abs(x) for x in t[i]) > span:
            t[i] = [a - c * b for a, b in zip(t[i], t[j])]
    rng.shuffle(t)
    return t


def _unit(rng: random.Random, p: int) -> int:
    while True:
        u = rng.randint(1, 4 * p)
        if u % p:
            return u


def _small_primes(lat: GramLattice, limit: int = 7) -> list[int]:
    return [p for p in ramified_primes(lat) if p <= limit]


def _nu_le(a, b) -> bool:
    if b is INFINITE:
        return True
    if a is INFINITE:
        return False
    return a <= b


def _gram(lat: GramLattice) -> list[list[int]]:
    return [list(r) for r in lat.gram]


def _suite_nu_monotone(rng, cases):
    fails = []
    for case in range(cases):
        lat = random_gram(rng, rng.choice((4, 4, 5)))
        n = lat.n
        while True:
            t = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                t[i][i] += rng.choice((1, 2, 3))
            try:
                full = sublattice(lat, t)
                break
            except ValueError:
                continue
        rank = rng.choice((3, n))
        sub = full if rank == n else make_lattice([r[:3] for r in full.gram[:3]])
        for p in sorted(set(_small_primes(lat)) | set(_small_primes(sub))):
            a, b = nu_profile(lat, p), nu_profile(sub, p)
            if not (_nu_le(a.nu, b.nu) and a.nu_prime <= b.nu_prime):
                fails.append({"case": case, "p": p, "L": _gram(lat), "M": _gram(sub)})
    return fails, {}


def _suite_newt_bounds(rng, cases):
    fails = []
    aniso = 0
    for case in range(cases):
        p = rng.choice((2, 3, 5))
        if rng.random() < 0.5:
            exps = sorted(rng.randint(0, 3) for _ in range(3))
            front = diagonal(*[_unit(rng, p) * p**e for e in exps])
        else:
            front = random_gram(rng, 3)
        split = jordan_decompose(front, p)
        e = split.levels[-1].exp + rng.randint(0, 2)
        eps = _unit(rng, p)
        g = [list(r) + [0] for r in front.gram] + [[0, 0, 0, eps * p**e]]
        lat = make_lattice(g)
        prof = nu_profile(lat, p)
        ok = prof.nu <= e + 1
        if front_anisotropic(front, p):
            aniso += 1
            ok = ok and prof.nu >= e - (2 if p == 2 else 0)
        if not ok:
            fails.append({"case": case, "p": p, "L": _gram(lat), "e": e, "nu": prof.nu})
    return fails, {"anisotropic_fronts": aniso}


def odd_table(p: int, units, exps) -> tuple[int, int]:
    """Closed form for (nu', nu) over an isotropic front, odd p."""
    e2, e3 = exps[1], exps[2]
    from .arith import is_square

    if is_square(-(p**e2) * units[0] * units[1], p):
        return e2 + 1, e2 + 1
    if e2 % 2 == 0:
        return e3 + 1, e3 + 1
    return e3, e3 + 1


def _suite_nuodd_table(rng, cases):
    from .jordan import isotropic_diagonal

    fails = []
    done = 0
    tries = 0
    while done < cases:
        tries += 1
        p = rng.choice((3, 5, 7))
        k = rng.choice((4, 5))
        exps = [0] + sorted(rng.randint(0, 4) for _ in range(k - 1))
        units = [_unit(rng, p) for _ in range(k)]
        front = [units[i] * p ** exps[i] for i in range(3)]
        if not isotropic_diagonal(front, p):
            continue
        done += 1
        lat = diagonal(*[units[i] * p ** exps[i] for i in range(k)])
        prof = nu_profile(lat, p)
        want = odd_table(p, units, exps)
        if (prof.nu_prime, prof.nu) != want:
            fails.append({"case": done - 1, "p": p, "diag": [units[i] * p ** exps[i] for i in range(k)],
                          "got": [prof.nu_prime, prof.nu], "want": list(want)})
    return fails, {"generated": tries}


def random_dyadic(rng: random.Random, rank: int) -> GramLattice:
    """Random 2-primitive lattice, diagonal-ish with occasional even planes."""
    blocks = []
    size = 0
    while size < rank:
        e = 0 if size == 0 else rng.choice((0, 1, 2, 3, 4, 5, 6, 8, 10))
        if rank - size >= 2 and rng.random() < 0.25:
            blk = [[2, 1], [1, 2]] if rng.random() < 0.7 else [[2, 1], [1, 4]]
        else:
            blk = [[rng.choice((1, 3, 5, 7, 9, 11, 13, 15))]]
        blocks.append([[x * 2**e for x in r] for r in blk])
        size += len(blk)
    n = size
    g = [[0] * n for _ in range(n)]
    off = 0
    for blk in blocks:
        for i, r in enumerate(blk):
            for j, x in enumerate(r):
                g[off + i][off + j] = x
        off += len(blk)
    lat = make_lattice(g)
    if rng.random() < 0.4:
        lat = sublattice(lat, random_unimodular(rng, n))
    return lat


def _suite_typea_gap(rng, cases):
    fails = []
    gaps = 0
    family = [diagonal(1, 1, 1, 4**k) for k in (4, 5, 6)]
    lats = family + [random_dyadic(rng, rng.choice((4, 5))) for _ in range(cases)]
    for case, lat in enumerate(lats):
        if lat.n > 5:
            continue
        prof = nu_profile(lat, 2)
        if prof.nu_prime + 3 < prof.nu:
            gaps += 1
            if not is_type_A(lat):
                fails.append({"case": case, "L": _gram(lat), "nu": prof.nu, "nu_prime": prof.nu_prime})
    return fails, {"gap_cases": gaps}


def gather_vectors(lat: GramLattice, p: int, nu: int, want: int = 3, mult: int = 400):
    """Vectors x with ord_p Q(x) = nu, over the first ``want`` represented values."""
    step = p**nu
    vals = []
    vecs = []
    k = 1
    mask = value_mask(lat, step * mult)
    while len(vals) < want and k <= mult:
        if k % p and (mask >> (k * step)) & 1:
            vals.append(k * step)
            vecs.extend(vectors_with_value(lat, k * step))
        k += 1
    return vals, vecs


def divisibility_violations(lat: GramLattice, p: int, vecs, exponent: int) -> list:
    mod = p**exponent
    bad = []
    for i, x in enumerate(vecs):
        for y in vecs[i:]:
            if lat.b(x, y) % mod:
                bad.append([list(x), list(y)])
    return bad


def _suite_aniso_divisibility(rng, cases):
    fails = []
    checked = 0
    lats = [(diagonal(1, 1, 1, 32), 2), (diagonal(1, 1, 1, 4096), 2)]
    while len(lats) < cases + 2:
        if rng.random() < 0.5:
            front = rng.choice(((1, 1, 1), (1, 1, 5), (1, 3, 3), (3, 3, 3), (1, 2, 5), (1, 1, 3 * 4)))
            if not front_anisotropic(diagonal(*front), 2):
                continue
            e = max(x.bit_length() - 1 for x in front) + rng.randint(3, 7)
            lat = diagonal(*front, rng.choice((1, 3, 5, 7)) * 2**e)
            if jordan_decompose(lat, 2).levels[0].exp != 0 or not is_type_A(lat):
                continue
            lats.append((lat, 2))
        else:
            p = rng.choice((3, 5))
            exps = [0] + sorted(rng.randint(0, 2) for _ in range(2))
            units = [_unit(rng, p) for _ in range(3)]
            front = [units[i] * p ** exps[i] for i in range(3)]
            if not front_anisotropic(diagonal(*front), p):
                continue
            e4 = exps[2] + rng.randint(0, 2)
            lats.append((diagonal(*front, _unit(rng, p) * p**e4), p))
    for case, (lat, p) in enumerate(lats):
        nu = nu_profile(lat, p).nu
        exponent = nu - 2 if p == 2 else nu - 1
        if exponent <= 0:
            continue
        vals, vecs = gather_vectors(lat, p, nu)
        checked += len(vecs)
        bad = divisibility_violations(lat, p, vecs, exponent)
        if bad:
            fails.append({"case": case, "p": p, "L": _gram(lat), "pair": bad[0]})
    return fails, {"vectors_checked": checked}


def _suite_remark_bounds(rng, cases):
    fails = []
    for case in range(cases):
        n = rng.choice((3, 4, 4, 5))
        lat = random_gram(rng, n)
        for p in _small_primes(lat, 5):
            prof = nu_profile(lat, p)
            problems = []
            if not (1 <= prof.nu_prime and _nu_le(prof.nu_prime, prof.nu)):
                problems.append("1 <= nu' <= nu")
            if (prof.nu is INFINITE) != (n == 3 and front_anisotropic(lat, p)):
                problems.append("nu infinite iff anisotropic ternary")
            if n >= 4 and nu_by_counting(lat, p) != (prof.nu, prof.nu_prime):
                problems.append("counting characterization")
            full = len(local_classes(lat, p, 1).classes) == len(sc_set(p))
            if (prof.nu == 1) != full:
                problems.append("nu = 1 iff Q(L_p) = Z_p")
            if problems:
                fails.append({"case": case, "p": p, "L": _gram(lat), "failed": problems})
    return fails, {}


def _suite_q_structure(rng, cases):
    fails = []
    for case in range(cases):
        lat = random_gram(rng, 4, spread=1, boost=4)
        rep = q_structure_check(lat, 300)
        if not rep.params["rhs_equals_genus"] or rep.verdict != "pass":
            fails.append({"case": case, "L": _gram(lat), "mismatch": rep.witnesses})
    return fails, {}


SUITES: dict[str, Callable] = {
    "nu-monotone": _suite_nu_monotone,
    "newt-bounds": _suite_newt_bounds,
    "nuodd-table": _suite_nuodd_table,
    "typeA-gap": _suite_typea_gap,
    "aniso-divisibility": _suite_aniso_divisibility,
    "remark-bounds": _suite_remark_bounds,
    "q-structure": _suite_q_structure,
}


def run_suite(name: str, seed: int, cases: int) -> ScanReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    rng = random.Random(f"{name}:{seed}")
    try:
        fails, stats = SUITES[name](rng, cases)
    except TheoremViolation as exc:
        fails, stats = [{"error": str(exc)}], {}
    params = {"seed": seed, "cases": cases, **stats}
    return ScanReport("lemma", name, params, "witness" if fails else "pass", fails[:5])


def lemma_suites(seed: int, cases: int, names=None) -> list[ScanReport]:
    names = list(SUITES) if names is None else list(names)
    return [run_suite(n, seed, cases) for n in names]


def escalation_check(lat: GramLattice) -> dict:
    """Escalation data plus an integrality check of one rescaled sublattice per m."""
    data = escalation_data(lat)
    out = data.to_json()
    checked = []
    for m in sorted({r.m for r in data.records} - {1}):
        xs = []
        k = 1
        while len(xs) < lat.n and k <= 64:
            vs = vectors_with_value(lat, m * m * k)
            if vs:
                xs.append(vs[0])
            k += 1
        sub = rescaled_sublattice(lat, m, xs)
        checked.append({"m": m, "gram": [list(r) for r in sub.gram]})
    out["rescaled"] = checked
    return out
