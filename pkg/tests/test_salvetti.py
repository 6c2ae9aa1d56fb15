import io
import random

import pytest

from salvhom.coxeter import (commuting_involutions, longest_element, make_system, multiply,
                             subset)
from salvhom.errors import ParseError, ResourceLimit
from salvhom.fields import CyclotomicField, RationalPoint
from salvhom.laurent import LaurentPoly
from salvhom.linalg import complex_ranks
from salvhom.lsm import dump_matrix, load_matrix, write_matrix
from salvhom.salvetti import (Cell, ComplexSpec, act, boundary_cell, build_complex, check_dd,
                              equivariance_holds, expected_size, isotypic_components_at_one,
                              specialize_complex)

t = LaurentPoly.tau()
ONE = LaurentPoly.one()


def test_boundary_of_one_cells():
    a1 = make_system("A", 1)
    e, s = a1.identity, a1.generators[0]
    assert boundary_cell(a1, Cell(e, 1)) == {Cell(s, 0): ONE, Cell(e, 0): -ONE}
    assert boundary_cell(a1, Cell(s, 1)) == {Cell(e, 0): t, Cell(s, 0): -ONE}


def test_boundary_of_top_cell_a2():
    a2 = make_system("A", 2)
    e = a2.identity
    s1, s2 = a2.generators
    s2s1 = multiply(a2, s2, s1)
    s1s2 = multiply(a2, s1, s2)
    expected = {
        Cell(e, subset(2)): -ONE, Cell(s1, subset(2)): ONE, Cell(s2s1, subset(2)): -ONE,
        Cell(e, subset(1)): ONE, Cell(s2, subset(1)): -ONE, Cell(s1s2, subset(1)): ONE,
    }
    assert boundary_cell(a2, Cell(e, subset(1, 2))) == expected


def test_a1_complex():
    cx = build_complex(make_system("A", 1))
    assert cx.sizes() == [2, 2]
    assert cx.matrix(1).to_dense() == [[-ONE, t], [ONE, -ONE]]


def test_a2_sizes():
    assert build_complex(make_system("A", 2)).sizes() == [6, 12, 6]


def test_quotmod_sizes_a4():
    from math import comb
    cx = build_complex(make_system("A", 4), ComplexSpec("quotmod", 2))
    assert cx.sizes() == [120 * (comb(4, h) - comb(2, h)) for h in range(5)]


def _specs(n):
    yield ComplexSpec()
    for v in ("subg", "quotf", "quotmod"):
        for k in range(n + 1):
            yield ComplexSpec(v, k)


@pytest.mark.parametrize("family,n", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 1),
                                      ("B", 2), ("B", 3), ("B", 4), ("D", 2), ("D", 3),
                                      ("D", 4)])
def test_dd_zero_and_sizes_all_variants(family, n):
    s = make_system(family, n)
    for spec in _specs(n):
        cx = build_complex(s, spec)
        assert check_dd(cx)
        assert cx.sizes() == [expected_size(s, spec, h) for h in range(n + 1)], str(spec)


def test_dd_zero_sampled_rank5():
    cx = build_complex(make_system("A", 5), max_degree=3)
    assert check_dd(cx)


def test_spec_parsing():
    assert str(ComplexSpec.parse("full")) == "full"
    assert ComplexSpec.parse("quotf:2") == ComplexSpec("quotf", 2)
    for bad in ["sub:1", "quotf", "quotf:x", "full:1"]:
        with pytest.raises(ValueError):
            ComplexSpec.parse(bad)


def test_b_quotient_identity():
    # quotient by the parabolic B_{n-1} blocks and the top filtration piece
    # select the same cells
    for n in (2, 3, 4):
        s = make_system("B", n)
        a = build_complex(s, ComplexSpec("quotmod", n - 1))
        b = build_complex(s, ComplexSpec("quotf", 1))
        assert a.bases == b.bases and a.boundaries == b.boundaries


def test_act():
    a3 = make_system("A", 3)
    chain = boundary_cell(a3, Cell(a3.identity, subset(1, 3)))
    assert act(a3, a3.identity, chain) == chain
    sigma = a3.generators[1]
    assert act(a3, sigma, {Cell(a3.identity, 1): ONE}) == {Cell(sigma, 1): ONE}


@pytest.mark.parametrize("family", ["A", "B"])
def test_equivariance_random_cells(family):
    s = make_system(family, 3)
    rng = random.Random(1)
    for _ in range(200):
        w = rng.choice(s.table.elements)
        assert equivariance_holds(s, Cell(w, rng.randrange(8)))


def test_exponents_are_nonnegative():
    s = make_system("B", 3)
    for w in s.table.elements:
        for exp in (p.min_exp for p in boundary_cell(s, Cell(w, 7)).values()):
            assert exp >= 0


def test_specialization_at_one():
    cx = specialize_complex(build_complex(make_system("A", 1)), RationalPoint(1))
    assert cx.matrix(1).to_dense() == [[-1, 1], [1, -1]]
    dims, ranks = complex_ranks(cx)
    assert dims == [1, 1]
    assert ranks[1] == 1


def test_d1_equals_tau_one():
    cx = build_complex(make_system("A", 2))
    a = specialize_complex(cx, CyclotomicField(1))
    b = specialize_complex(cx, RationalPoint(1))
    assert complex_ranks(a)[1] == complex_ranks(b)[1]


def test_a2_betti_at_one():
    cx = specialize_complex(build_complex(make_system("A", 2)), RationalPoint(1))
    assert complex_ranks(cx)[0] == [1, 3, 2]


def test_lsm_dump_a1():
    text = dump_matrix(build_complex(make_system("A", 1)), 1)
    lines = text.splitlines()
    assert lines[0] == "%%LSM 2 2 laurent"
    assert len(lines) == 5


@pytest.mark.parametrize("ring", [None, RationalPoint(1), CyclotomicField(3)])
def test_lsm_round_trip(ring):
    cx = build_complex(make_system("A", 3))
    if ring is not None:
        cx = specialize_complex(cx, ring)
    for h in (1, 2, 3):
        m = cx.matrix(h)
        buf = io.StringIO()
        write_matrix(m, buf)
        assert load_matrix(buf.getvalue()) == m


@pytest.mark.parametrize("text", [
    "%%LSM 2 2 laurent\n0 0 x:1/1\n",
    "%%LSM 2 2 laurent\n0 0\n",
    "%%LSM 2 2 laurent\n5 0 0:1/1\n",
    "LSM 2 2 laurent\n",
    "%%LSM 2 2 nowhere\n",
])
def test_lsm_parse_errors(text):
    with pytest.raises(ParseError):
        load_matrix(text)


def test_lsm_parse_error_line_number():
    with pytest.raises(ParseError) as info:
        load_matrix("%%LSM 2 2 laurent\n0 0 0:1/1\n1 1 0:1:1\n")
    assert info.value.line == 3


def test_cell_limit(monkeypatch):
    monkeypatch.setenv("SALV_CELL_LIMIT", "100")
    with pytest.raises(ResourceLimit):
        build_complex(make_system("A", 3))


def test_longest_element_cell_boundary_parity():
    s = make_system("D", 4)
    assert boundary_cell(s, Cell(longest_element(s), s.full_mask))


@pytest.mark.parametrize("family,n,spec", [("A", 3, ComplexSpec()), ("B", 3, ComplexSpec()),
                                           ("D", 4, ComplexSpec()),
                                           ("B", 3, ComplexSpec("quotf", 1)),
                                           ("A", 4, ComplexSpec("subg", 2))])
def test_isotypic_pieces_add_up_to_the_rational_complex(family, n, spec):
    s = make_system(family, n)
    cx = build_complex(s, spec)
    whole = complex_ranks(specialize_complex(cx, RationalPoint(1), check=False))
    pieces = list(isotypic_components_at_one(cx, commuting_involutions(s)))
    assert len(pieces) == 2 ** len(commuting_involutions(s))
    dims, ranks = [0] * (cx.top + 1), [0] * (cx.top + 1)
    for piece in pieces:
        check_dd(piece)
        d, r = complex_ranks(piece)
        dims = [a + b for a, b in zip(dims, d)]
        ranks = [a + b for a, b in zip(ranks, r)]
    assert (dims, ranks) == (list(whole[0]), list(whole[1]))
