import itertools

import pytest

from salvhom.coxeter import (commuting_involutions, coset_decompose, enumerate_parabolic,
                             left_orbits, length, longest_element, make_system, minimal_coset_reps, multiply, parabolic_index,
                             reflection_count, right_descents, subset, lower_set, word)
from salvhom.errors import MalformedElement, RankOutOfRange, UnsupportedFamily


def test_group_orders():
    assert make_system("A", 1).order == 2
    assert make_system("A", 4).order == 120
    assert make_system("B", 3).order == 48
    assert make_system("D", 4).order == 192


def test_table_matches_order():
    for f, n in [("A", 3), ("B", 3), ("D", 4)]:
        s = make_system(f, n)
        assert len(s.table) == s.order


def test_invalid_systems():
    with pytest.raises(RankOutOfRange):
        make_system("D", 1)
    with pytest.raises(RankOutOfRange):
        make_system("A", 0)
    with pytest.raises(UnsupportedFamily):
        make_system("E", 6)


def test_multiplication_examples():
    a2 = make_system("A", 2)
    s1, s2 = a2.generators
    assert multiply(a2, s1, s1) == a2.identity
    assert length(a2, multiply(a2, multiply(a2, s1, s2), s1)) == 3
    b2 = make_system("B", 2)
    t1, t2 = b2.generators
    assert length(b2, multiply(b2, t1, t2)) == 2


def test_malformed_element():
    with pytest.raises(MalformedElement):
        length(make_system("A", 2), (1, 1, 2))


@pytest.mark.parametrize("family,n", [("A", 1), ("A", 3), ("A", 5), ("B", 2), ("B", 3),
                                      ("D", 3), ("D", 4)])
def test_longest_element_length_is_reflection_count(family, n):
    s = make_system(family, n)
    w0 = longest_element(s)
    assert length(s, w0) == reflection_count(s)
    assert max(s.table.lengths) == reflection_count(s)


def test_reflection_counts():
    assert reflection_count(make_system("A", 4)) == 10
    assert reflection_count(make_system("B", 3)) == 9
    assert reflection_count(make_system("D", 4)) == 12


def _reflections_bruteforce(s):
    # conjugates of the generators
    out = set()
    for w in s.table.elements:
        inv = next(x for x in s.table.elements if multiply(s, w, x) == s.identity)
        for g in s.generators:
            out.add(multiply(s, multiply(s, w, g), inv))
    return len(out)


@pytest.mark.parametrize("family,n", [("A", 3), ("B", 3), ("D", 4)])
def test_reflection_count_bruteforce(family, n):
    s = make_system(family, n)
    assert _reflections_bruteforce(s) == reflection_count(s)


@pytest.mark.parametrize("family,n", [("A", 3), ("B", 3), ("D", 3)])
def test_descents_of_extremes(family, n):
    s = make_system(family, n)
    assert right_descents(s, s.identity) == 0
    assert right_descents(s, longest_element(s)) == s.full_mask
    a2 = make_system("A", 2)
    assert right_descents(a2, a2.generators[0]) == subset(1)


@pytest.mark.parametrize("family,n", [("A", 3), ("B", 3), ("D", 4)])
def test_length_is_word_length(family, n):
    s = make_system(family, n)
    for w in s.table.elements[::7]:
        letters = word(s, w)
        assert len(letters) == length(s, w)
        x = s.identity
        for i in letters:
            x = multiply(s, x, s.generators[i - 1])
        assert x == w


def test_parabolic_enumeration():
    assert enumerate_parabolic(make_system("A", 2), 0) == [make_system("A", 2).identity]
    assert len(enumerate_parabolic(make_system("A", 3), subset(1, 2))) == 6
    assert len(enumerate_parabolic(make_system("B", 3), subset(1, 2))) == 8


def test_minimal_coset_reps():
    a2 = make_system("A", 2)
    full = subset(1, 2)
    assert minimal_coset_reps(a2, full, full) == [a2.identity]
    reps = minimal_coset_reps(a2, full, subset(1))
    s1, s2 = a2.generators
    assert set(reps) == {a2.identity, s2, multiply(a2, s1, s2)}
    assert len(minimal_coset_reps(a2, full, 0)) == 6


def test_coset_decompose():
    a2 = make_system("A", 2)
    e = a2.identity
    assert coset_decompose(a2, e, subset(1)) == (e, e)
    w0 = longest_element(a2)
    upper, lower = coset_decompose(a2, w0, subset(2))
    assert lower == a2.generators[1]
    assert length(a2, upper) == 2
    assert coset_decompose(a2, w0, a2.full_mask) == (e, w0)


@pytest.mark.parametrize("family,n", [("A", 3), ("B", 3), ("D", 3)])
def test_coset_decompose_exhaustive(family, n):
    s = make_system(family, n)
    for mask in range(1 << n):
        for w in s.table.elements:
            upper, lower = coset_decompose(s, w, mask)
            assert multiply(s, upper, lower) == w
            assert right_descents(s, upper) & mask == 0
            assert length(s, w) == length(s, upper) + length(s, lower)


def test_parabolic_index():
    assert parabolic_index(make_system("A", 3), make_system("A", 3).full_mask) == 1
    assert parabolic_index(make_system("A", 3), lower_set(2)) == 4
    assert parabolic_index(make_system("A", 4), lower_set(2)) == 20


def test_generators_are_involutions():
    for f, n in itertools.product("ABD", [2, 3]):
        s = make_system(f, n)
        for g in s.generators:
            assert multiply(s, g, g) == s.identity


@pytest.mark.parametrize("family,n", [("A", 4), ("B", 3), ("D", 4)])
def test_left_orbits_of_commuting_involutions(family, n):
    s = make_system(family, n)
    gens = commuting_involutions(s)
    for g in gens:
        assert multiply(s, g, g) == s.identity
        for h in gens:
            assert multiply(s, g, h) == multiply(s, h, g)
    rep, bits = left_orbits(s, gens)
    elements = s.table.elements
    assert rep.count(None) == 0
    assert sum(1 for i, r in enumerate(rep) if r == i) * 2 ** len(gens) == s.order
    for i, w in enumerate(elements):
        h = s.identity
        for j, g in enumerate(gens):
            if bits[i] >> j & 1:
                h = multiply(s, h, g)
        assert multiply(s, h, elements[rep[i]]) == w
