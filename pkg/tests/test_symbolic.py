import itertools

import pytest

from billiard_zeta.symbolic import (CyclicWord, canonical_rotation, count_words,
                                    enumerate_primitive_cycles, enumerate_words, extend_e,
                                    fit_geometric, is_admissible, is_primitive, parse_word,
                                    var_estimate)
from billiard_zeta.thermo import window_function


def test_enumerate_counts():
    assert [tuple(w) for w in enumerate_words(3, 1)] == [(1,), (2,), (3,)]
    assert len(enumerate_words(3, 2)) == 6
    brute = [w for w in itertools.product((1, 2, 3), repeat=4) if is_admissible(w)]
    assert sorted(tuple(w) for w in enumerate_words(3, 4)) == sorted(brute)
    assert count_words(3, 4) == 24


def test_enumerate_endpoints():
    ws = enumerate_words(3, 5, first=1, last=2)
    assert ws and all(w[0] == 1 and w[-1] == 2 for w in ws)


def _brute_cycles(k, n):
    out = set()
    for w in itertools.product(range(1, k + 1), repeat=n):
        if is_admissible(w + w[:1]) and is_primitive(w):
            out.add(canonical_rotation(w))
    return out


def test_primitive_cycles():
    cyc = enumerate_primitive_cycles(3, 6)
    assert {tuple(w) for w in cyc[2]} == {(1, 2), (1, 3), (2, 3)}
    assert {tuple(w) for w in cyc[3]} == {(1, 2, 3), (1, 3, 2)}
    for n in range(2, 7):
        assert {tuple(w) for w in cyc[n]} == {tuple(w) for w in _brute_cycles(3, n)}
    two = enumerate_primitive_cycles(2, 7)
    assert all(not two.get(n) for n in (3, 5, 7))


def test_cyclic_word():
    assert tuple(CyclicWord((2, 3, 1))) == (1, 2, 3)
    assert not is_primitive((1, 2, 1, 2))
    assert tuple(parse_word("1,2,3")) == (1, 2, 3)


def test_extend_e():
    e = extend_e((1, 2, 3), 4)
    assert e.past[-1] != 1 and tuple(e.past[-3:]) == (2, 1, 2)
    e = extend_e((2, 1), 3)
    assert tuple(e.past[-2:]) == (2, 1)
    for w in enumerate_words(3, 4):
        assert is_admissible(extend_e(w, 6).symbols)


def test_var_estimate_trivial(two):
    assert var_estimate(lambda s, o: 1.0, 3, 3, samples=16) == 0.0
    F = window_function(two, "f")
    for n in (2, 3, 4):
        assert var_estimate(F, 2, n, samples=4) < 1e-12


def test_var_estimate_decay(three):
    F = window_function(three, "f")
    ns = range(2, 7)
    v = [var_estimate(F, 3, n, samples=64) for n in ns]
    _, theta = fit_geometric(ns, v)
    assert 0 < theta < 1


def test_fit_geometric():
    C, t = fit_geometric([1, 2, 3, 4], [2 * 0.5 ** n for n in (1, 2, 3, 4)])
    assert C == pytest.approx(2) and t == pytest.approx(0.5)
