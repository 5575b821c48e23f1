import random

import pytest

from qflocal.lattice import (
    DefinitenessError,
    DegenerateSublatticeError,
    LatticeError,
    diagonal,
    enumerate_values,
    index_p_sublattices,
    make_lattice,
    ortho_sum,
    rescale,
    short_vectors,
    sublattice,
    vectors_with_value,
)
from qflocal.regular import random_gram, random_unimodular
from oracles import brute_values

A2 = [[2, 1], [1, 2]]


def test_construction():
    l3 = diagonal(1, 1, 1)
    assert (l3.n, l3.det) == (3, 1)
    a = make_lattice(A2)
    assert (a.det, a.scale, a.norm) == (3, 1, 2)
    with pytest.raises(DefinitenessError):
        make_lattice([[1, 2], [2, 1]])
    with pytest.raises(LatticeError):
        make_lattice([[1, 2], [3, 1]])
    with pytest.raises(LatticeError):
        make_lattice([[1, 0], [0]])
    with pytest.raises(LatticeError):
        make_lattice([[1.5, 0], [0, 1]])


def test_builders():
    assert ortho_sum(diagonal(1), diagonal(3)) == diagonal(1, 3)
    assert rescale(make_lattice(A2), 4).matrix() == [[8, 4], [4, 8]]
    sub = sublattice(diagonal(1, 1), [[2, 0], [0, 1]])
    assert sub == diagonal(4, 1) and sub.det == 4
    with pytest.raises(DegenerateSublatticeError):
        sublattice(diagonal(1, 1), [[1, 1], [2, 2]])
    with pytest.raises(LatticeError):
        rescale(diagonal(1), 0)


def test_values_examples():
    assert enumerate_values(diagonal(1, 1, 1), 15).values == tuple(n for n in range(1, 16) if n not in (7, 15))
    assert enumerate_values(diagonal(1, 1, 1, 1), 20).values == tuple(range(1, 21))
    assert enumerate_values(diagonal(5), 12).values == (5,)
    assert enumerate_values(diagonal(1, 1, 1), 0).values == ()
    rs = enumerate_values(diagonal(1, 1, 1), 50)
    assert 14 in rs and 28 not in rs


def test_vectors_examples():
    assert vectors_with_value(diagonal(1, 1, 1), 3) == [(1, -1, -1), (1, -1, 1), (1, 1, -1), (1, 1, 1)]
    assert vectors_with_value(diagonal(1, 1, 1), 7) == []
    assert (32, 0, 0, 0) in vectors_with_value(diagonal(1, 1, 1, 4096), 1024)


def test_vectors_have_value():
    lat = make_lattice([[2, 1, 0], [1, 3, 1], [0, 1, 5]])
    for n in range(1, 40):
        vs = vectors_with_value(lat, n)
        assert all(lat.q(v) == n for v in vs)
        assert bool(vs) == (n in enumerate_values(lat, 40))


def test_short_vectors_count():
    # theta series of Z^3: r_3(1..5) = 6, 12, 8, 6, 24, halved for sign pairs
    counts = {}
    for _, v in short_vectors(diagonal(1, 1, 1), 5):
        counts[v] = counts.get(v, 0) + 1
    assert counts == {1: 3, 2: 6, 3: 4, 4: 3, 5: 12}


def test_brute_agreement():
    rng = random.Random(20261014)
    for _ in range(100):
        n = rng.randint(1, 3)
        lat = random_gram(rng, n)
        bound = rng.randint(20, 200)
        assert set(enumerate_values(lat, bound).values) == brute_values(lat.matrix(), bound), lat


def test_index_sublattices():
    subs = list(index_p_sublattices(diagonal(1, 1), 2))
    assert [s.matrix() for s in subs] == [[[1, 0], [0, 4]], [[2, 2], [2, 4]], [[4, 0], [0, 1]]]
    assert sum(1 for _ in index_p_sublattices(diagonal(1, 1, 1, 1), 3)) == 40
    for s in index_p_sublattices(diagonal(1, 2, 3), 3):
        assert s.det == 6 * 9
    with pytest.raises(LatticeError):
        list(index_p_sublattices(diagonal(1, 1), 4))


def test_sublattice_values_contained():
    rng = random.Random(5)
    lat = make_lattice([[2, 1, 0], [1, 2, 1], [0, 1, 4]])
    full = set(enumerate_values(lat, 500).values)
    for q in (2, 3):
        for sub in index_p_sublattices(lat, q):
            assert set(enumerate_values(sub, 500).values) <= full
    for _ in range(10):
        t = random_unimodular(rng, 3)
        assert enumerate_values(sublattice(lat, t), 500).values == tuple(sorted(full))


def test_rescale_values():
    lat = make_lattice(A2)
    vals = enumerate_values(lat, 100).values
    assert enumerate_values(rescale(lat, 3), 300).values == tuple(3 * v for v in vals)
