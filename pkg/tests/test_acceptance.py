"""Acceptance criteria, one test (or a small group) per criterion.

Each check is recorded in ``conftest.ACCEPTANCE`` and the terminal summary
prints one PASS/FAIL line per criterion.
"""
import random
import time
from pathlib import Path

import numpy as np
import pytest

import conftest
from oracles import nu_oracle, reduce_image, residue_image, vp_int
from qflocal import cli
from qflocal.arith import sc_set, square_class, unit_classes
from qflocal.invariants import escalation_data, is_type_A, nu_by_counting, nu_profile, rescaled_sublattice
from qflocal.jordan import jordan_decompose
from qflocal.lattice import diagonal, enumerate_values, vectors_with_value
from qflocal.localrep import represents_local, sigma
from qflocal.regular import (
    divisibility_violations,
    gather_vectors,
    newness_scan,
    q_structure_check,
    random_gram,
    regularity_scan,
    run_suite,
)

CORPUS = Path(cli.__file__).parent / "data" / "corpus.jsonl"


def record(k, name, ok):
    conftest.ACCEPTANCE.setdefault(k, []).append((name, bool(ok)))
    return ok


def corpus(min_rank=1):
    return [e.lattice for e in cli.read_inputs([str(CORPUS)]) if e.lattice.n >= min_rank]


# 1 -------------------------------------------------------------------------

def _small_lattices(count, seed=1):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        lat = random_gram(rng, rng.randint(1, 3))
        if all(vp_int(lat.det, p) <= 4 for p in (2, 3, 5)):
            out.append(lat)
    return out


def test_criterion_1_local_oracle():
    start = time.perf_counter()
    mismatches = checked = 0
    for lat in _small_lattices(1000):
        for p in (2, 3, 5):
            top = residue_image(lat.matrix(), p, 4 + sigma(p))
            split = jordan_decompose(lat, p)
            for v in range(5):
                w = v + sigma(p)
                image = reduce_image(top, p, w)
                for u in unit_classes(p):
                    a = u.rep * p**v
                    checked += 1
                    if represents_local(split, p, a) != bool(image[a % p**w]):
                        mismatches += 1
    elapsed = time.perf_counter() - start
    record(1, f"{mismatches} mismatches in {checked} decisions", mismatches == 0)
    record(1, f"wall time {elapsed:.0f}s <= 300s", elapsed <= 300)
    assert mismatches == 0
    assert elapsed <= 300


# 2 -------------------------------------------------------------------------

def test_criterion_2_three_squares():
    start = time.perf_counter()
    bound = 10**5

    def excluded(n):
        while n % 4 == 0:
            n //= 4
        return n % 8 == 7

    got = enumerate_values(diagonal(1, 1, 1), bound).values
    want = tuple(n for n in range(1, bound + 1) if not excluded(n))
    exact = record(2, "values equal the Legendre set", got == want)
    scan = record(2, "regularity scan passes", regularity_scan(diagonal(1, 1, 1), bound).verdict == "pass")
    elapsed = time.perf_counter() - start
    fast = record(2, f"wall time {elapsed:.1f}s <= 60s", elapsed <= 60)
    assert exact and scan and fast


# 3 -------------------------------------------------------------------------

@pytest.mark.parametrize("r", [1, 2, 3])
def test_criterion_3_family_regular(r):
    lat = diagonal(1, 1, 1, 2 ** (2 * r - 1))
    ok = record(3, f"I_{r} regular to 1e5", regularity_scan(lat, 10**5).verdict == "pass")
    assert ok


def test_criterion_3_five_squares_not_new():
    rep = newness_scan(diagonal(1, 1, 1, 1, 1), 5000, pmax=5)
    ok = record(3, "five squares not-new at B=5000", rep.verdict == "not-new")
    assert ok


# The family is not new for the sublattice notion scanned here: among three
# integers two share a parity, so the index-2 sublattice x2 = x3 (mod 2)
# has the same values.  The scan therefore reports not-new with a witness,
# and the candidate-new requirement cannot be met.
@pytest.mark.xfail(strict=True, reason="index-2 sublattice with equal values exists")
@pytest.mark.parametrize("r", [1, 2, 3])
def test_criterion_3_family_candidate_new(r):
    lat = diagonal(1, 1, 1, 2 ** (2 * r - 1))
    rep = newness_scan(lat, 5000, pmax=5)
    record(3, f"I_{r} candidate-new at B=5000 (got {rep.verdict})", rep.verdict == "candidate-new")
    assert rep.verdict == "candidate-new"


# 4 -------------------------------------------------------------------------

CASES_4 = [((1, 1, 1, 8), 2, 1), ((1, 1, 1, 32), 4, None)] + [((1, 1, 1, 4**k), 2 * k - 2, 1) for k in (4, 5, 6)]


@pytest.mark.parametrize("entries,nu,nu_prime", CASES_4)
def test_criterion_4_profiles(entries, nu, nu_prime):
    lat = diagonal(*entries)
    prof = nu_profile(lat, 2)
    oracle = nu_oracle(entries, 2, [s.value for s in sc_set(2)], 12)
    ok = prof.nu == nu and oracle[0] == nu
    if nu_prime is not None:
        ok = ok and prof.nu_prime == nu_prime and oracle[1] == nu_prime
    ok = ok and nu_by_counting(lat, 2) == (prof.nu, prof.nu_prime)
    record(4, f"profile of diag{entries}", ok)
    assert ok


# 5 -------------------------------------------------------------------------

def test_criterion_5_odd_table():
    rep = run_suite("nuodd-table", 1, 200)
    ok = record(5, "200 odd-p instances match the closed form", rep.verdict == "pass" and rep.params["cases"] == 200)
    assert ok, rep.witnesses


# 6 -------------------------------------------------------------------------

def test_criterion_6_type_a_gap():
    rep = run_suite("typeA-gap", 1, 500)
    a = record(6, "no gap > 3 counterexample in 500 lattices", rep.verdict == "pass")
    fam = True
    for k in (4, 5, 6):
        lat = diagonal(1, 1, 1, 4**k)
        prof = nu_profile(lat, 2)
        fam = fam and prof.nu - prof.nu_prime == 2 * k - 3 and is_type_A(lat)
    b = record(6, "power family has the stated gap and is type A", fam)
    assert a and b, rep.witnesses


# 7 -------------------------------------------------------------------------

@pytest.mark.parametrize("d", [32, 4096])
def test_criterion_7_dyadic_divisibility(d):
    lat = diagonal(1, 1, 1, d)
    nu = nu_profile(lat, 2).nu
    vals, vecs = gather_vectors(lat, 2, nu)
    assert vecs and all(vp_int(v, 2) == nu for v in vals)
    bad = divisibility_violations(lat, 2, vecs, nu - 2)
    ok = record(7, f"diag(1,1,1,{d}): {len(vecs)} vectors, {len(bad)} violations", not bad)
    assert ok, bad[:3]


def test_criterion_7_odd_family():
    rep = run_suite("aniso-divisibility", 1, 20)
    ok = record(7, "seeded anisotropic-front family", rep.verdict == "pass" and rep.params["vectors_checked"] > 0)
    assert ok, rep.witnesses


# 8 -------------------------------------------------------------------------

@pytest.mark.parametrize("suite,cases", [("nu-monotone", 300), ("remark-bounds", 300), ("newt-bounds", 100)])
def test_criterion_8_bounds(suite, cases):
    rep = run_suite(suite, 1, cases)
    ok = record(8, f"{suite} on {cases} cases", rep.verdict == "pass")
    assert ok, rep.witnesses


# 9 -------------------------------------------------------------------------

def test_criterion_9_escalation():
    lat = diagonal(1, 1, 1, 4096)
    data = escalation_data(lat)
    rec = data.record((square_class(7168, 2),))
    prof = data.profiles[2]
    chain = [2, prof.nu_prime + 1, prof.nu - 3, 2 * rec.kappa[2], prof.nu - 2]
    ok = (
        data.e == (2,)
        and data.xi[2].value == 28
        and rec.kappa == {2: 4}
        and rec.m == 16
        and all(a <= b for a, b in zip(chain, chain[1:]))
    )
    record(9, "E, xi, kappa, m and the inequality chain", ok)
    xs = [vectors_with_value(lat, 256 * k)[0] for k in (1, 2, 3)]
    sub = rescaled_sublattice(lat, 16, xs)
    integral = record(9, "rescaled sublattice is integral", sub.n == 3 and all(isinstance(x, int) for r in sub.gram for x in r))
    assert ok and integral


def test_criterion_9_injective_on_corpus():
    bad = []
    for lat in corpus(min_rank=4):
        data = escalation_data(lat)
        primes = [r.eta_prime for r in data.records]
        if len(set(primes)) != len(primes):
            bad.append(lat.name)
    ok = record(9, f"eta -> eta' injective on the corpus ({len(bad)} failures)", not bad)
    assert ok, bad


# 10 ------------------------------------------------------------------------

def test_criterion_10_structure():
    # every non-universal entry, then universal quaternaries up to 50
    pool = corpus(min_rank=4)
    rest = [lat for lat in pool if not lat.name.startswith("univ-")]
    lats = rest + [lat for lat in pool if lat.name.startswith("univ-")][: 50 - len(rest)]
    assert len(lats) == 50
    genus_bad, values_bad, regular = [], [], 0
    for lat in lats:
        rep = q_structure_check(lat, 2000)
        if not rep.params["rhs_equals_genus"]:
            genus_bad.append(lat.name)
        if rep.params["regular_up_to_bound"]:
            regular += 1
            if not rep.params["rhs_equals_values"]:
                values_bad.append(lat.name)
    a = record(10, f"RHS equals the genus set on 50 lattices ({len(genus_bad)} failures)", not genus_bad)
    b = record(10, f"RHS equals Q(L) on the {regular} regular ones ({len(values_bad)} failures)", regular > 0 and not values_bad)
    c = record(10, f"{50 - regular} non-regular lattices in the sample", regular < 50)
    assert a and b and c, (genus_bad, values_bad)
