import random
from collections import Counter
from fractions import Fraction

import pytest

from qflocal.arith import ArithError, square_class, vp
from qflocal.jordan import (
    BLOCK_A,
    UNIT,
    hasse,
    hasse_diagonal,
    isotropic_diagonal,
    is_isotropic,
    jordan_decompose,
    rational_diagonalize,
)
from qflocal.lattice import diagonal, make_lattice, sublattice
from qflocal.localrep import local_classes
from qflocal.regular import random_gram, random_unimodular

A2 = make_lattice([[2, 1], [1, 2]])


def shape(split):
    return [(lv.exp, [b.label() for b in lv.blocks]) for lv in split.levels]


def test_examples():
    assert shape(jordan_decompose(diagonal(1, 3, 4), 2)) == [(0, ["u1", "u3"]), (2, ["u1"])]
    s = jordan_decompose(A2, 2)
    assert len(s.levels) == 1 and s.levels[0].exp == 0 and s.levels[0].blocks[0].kind == BLOCK_A
    assert shape(jordan_decompose(diagonal(1, 3, 18, 27), 3)) == [(0, ["u1"]), (1, ["u1"]), (2, ["u2"]), (3, ["u1"])]
    a4 = make_lattice([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]])
    assert shape(jordan_decompose(a4, 2)) == [(0, ["A", "H"])]
    s5 = jordan_decompose(a4, 5)
    assert [(lv.exp, lv.rank) for lv in s5.levels] == [(0, 3), (1, 1)]
    # odd-p components are determined by rank and determinant class
    d0 = 1
    for b in s5.levels[0].blocks:
        d0 *= b.det()
    assert square_class(d0, 5).rep == 1


def test_str_and_json():
    s = jordan_decompose(diagonal(1, 3, 4), 2)
    assert str(s) == "2^0:u1,u3 | 2^2:u1"
    assert s.to_json() == [{"exp": 0, "blocks": ["u1", "u3"]}, {"exp": 2, "blocks": ["u1"]}]


def test_rational_diagonalize():
    assert rational_diagonalize(diagonal(1, 1, 1)).entries == (1, 1, 1)
    d = rational_diagonalize(A2)
    assert d.entries == (2, Fraction(3, 2))
    g = [[0, 1], [1, 0]]
    d = rational_diagonalize(g)
    t = d.witness
    for i in range(2):
        for j in range(2):
            v = sum(t[i][a] * g[a][b] * t[j][b] for a in range(2) for b in range(2))
            assert v == (d.entries[i] if i == j else 0)


def test_isotropy_examples():
    assert not is_isotropic(diagonal(1, 1, 1), 2)
    assert is_isotropic(diagonal(1, 2, 3), 3)
    assert not is_isotropic(diagonal(1, 1, 3), 3)
    assert is_isotropic(diagonal(1, 1, 1, 1, 1), 2)
    with pytest.raises(ArithError):
        isotropic_diagonal([], 2)


def test_quaternary_anisotropic():
    # the norm form of the Hamilton quaternions is anisotropic exactly at 2
    assert not is_isotropic(diagonal(1, 1, 1, 1), 2)
    assert is_isotropic(diagonal(1, 1, 1, 1), 3)


def _field_class(a, p):
    c = square_class(a, p)
    return c.val % 2, c.rep


def _det_unit_class(split):
    d = Fraction(1)
    for x in split.diagonal():
        d *= x
    return _field_class(d, split.prime)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_basis_invariance(p):
    rng = random.Random(p)
    for _ in range(50):
        lat = random_gram(rng, rng.randint(2, 4))
        t = random_unimodular(rng, lat.n)
        other = sublattice(lat, t)
        a, b = jordan_decompose(lat, p), jordan_decompose(other, p)
        assert Counter((lv.exp, lv.rank) for lv in a.levels) == Counter((lv.exp, lv.rank) for lv in b.levels)
        assert _det_unit_class(a) == _det_unit_class(b)
        assert hasse(lat, p) == hasse(other, p)
        assert is_isotropic(lat, p) == is_isotropic(other, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_splitting_preserves_space(p):
    rng = random.Random(10 + p)
    for _ in range(50):
        lat = random_gram(rng, rng.randint(2, 4))
        split = jordan_decompose(lat, p)
        assert split.rank == lat.n
        assert sum(lv.exp * lv.rank for lv in split.levels) == vp(lat.det, p)
        assert _det_unit_class(split) == _field_class(lat.det, p)
        assert hasse_diagonal(split.diagonal(), p) == hasse(lat, p)


def test_unit_blocks_only_at_odd_p():
    rng = random.Random(3)
    for _ in range(30):
        lat = random_gram(rng, 4)
        for p in (3, 5, 7):
            assert all(b.kind == UNIT for _, b in jordan_decompose(lat, p).blocks())


def test_isometric_local_class_sets():
    a = local_classes(diagonal(1, 3, 4), 2, 8)
    b = local_classes(diagonal(1, 7, 20), 2, 8)
    assert a.classes == b.classes
