from fractions import Fraction

import pytest

from salvhom.errors import (BadPrime, DivisionByZero, NonCyclotomicFactor, OrderMismatch,
                            ParseError)
from salvhom.fields import (CyclotomicField, PrimeField, RationalPoint, field_from_tag,
                            prime_specialize, primes_for_order, specialize)
from salvhom.laurent import (LaurentPoly, TorsionFactor, cyclotomic, cyclotomic_part,
                             factor_unity, lp_add, lp_divmod, lp_gcd, lp_mul, lp_neg)

t = LaurentPoly.tau()
one = LaurentPoly.one()


def poly(*coeffs, shift=0):
    return LaurentPoly.from_coeffs(list(coeffs), shift)


def test_ring_examples():
    assert lp_mul(t - 1, t + 1) == t * t - 1
    assert lp_mul(LaurentPoly.monomial(1, -1), t) == one
    p = 3 * t ** 2 - Fraction(1, 2) * LaurentPoly.monomial(1, -4)
    assert lp_add(p, lp_neg(p)).is_zero()


def test_units():
    assert LaurentPoly.monomial(-3, 5).is_unit()
    assert not (t - 1).is_unit()
    assert (LaurentPoly.monomial(2, 3) * LaurentPoly.monomial(2, 3).unit_inverse()) == one


def test_divmod_examples():
    assert lp_divmod(t * t - 1, t - 1) == (t + 1, LaurentPoly.zero())
    assert lp_divmod(t * t + 1, t - 1) == (t + 1, 2 * one)
    assert lp_divmod(LaurentPoly.zero(), t + 3) == (LaurentPoly.zero(), LaurentPoly.zero())
    with pytest.raises(DivisionByZero):
        lp_divmod(t, LaurentPoly.zero())


def test_gcd_examples():
    assert lp_gcd(t * t - 1, t ** 3 - 1) == t - 1
    assert lp_gcd(cyclotomic(3), cyclotomic(2)) == one
    p = 4 * t ** 3 + 2 * t
    assert lp_gcd(p, p) == p.normalized()


def test_cyclotomic_polynomials():
    assert cyclotomic(1) == t - 1
    assert cyclotomic(3) == t * t + t + 1
    assert cyclotomic(6) == t * t - t + 1
    for n in range(1, 25):
        prod = one
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == t ** n - 1


def test_factor_unity():
    unit, factors = factor_unity(t ** 3 - 1)
    assert factors == [TorsionFactor(1, 1), TorsionFactor(3, 1)]
    unit, factors = factor_unity(5 * t * t - 5 * t)
    assert unit == 5 * t and factors == [TorsionFactor(1, 1)]
    with pytest.raises(NonCyclotomicFactor):
        factor_unity(t * t - 2)
    unit, factors = factor_unity((t ** 2 - 1) ** 2 * LaurentPoly.monomial(1, -7))
    assert factors == [TorsionFactor(1, 2), TorsionFactor(2, 2)]


def test_cyclotomic_part_keeps_the_rest():
    p = (t ** 6 - 1) * (t * t - 2)
    c, factors, rest = cyclotomic_part(p)
    assert c == t ** 6 - 1
    assert rest == t * t - 2
    assert [f.d for f in factors] == [1, 2, 3, 6]


def test_text_round_trip():
    p = 4 * t ** 3 - Fraction(1, 2) * LaurentPoly.monomial(1, -1)
    assert LaurentPoly.from_text(p.to_text()) == p
    assert LaurentPoly.from_text("0").is_zero()
    for bad in ["1:x/1", "0:1/0", "2:1/1,1:1/1", "0:0/1", "t"]:
        with pytest.raises(ParseError):
            LaurentPoly.from_text(bad)


def test_cyclotomic_specialization():
    assert specialize(t - 1, 1).is_zero()
    assert specialize(t * t + t + 1, 3).is_zero()
    tau3 = specialize(t, 3)
    assert tau3.inverse() == specialize(-t - 1, 3)
    assert (tau3 * tau3.inverse()) == specialize(one, 3)


def test_cyclotomic_field_arithmetic():
    f = CyclotomicField(5)
    a = f.from_poly(t + 2)
    b = f.inv(a)
    assert f.mul(a, b) == f.one
    assert f.is_zero(f.from_poly(cyclotomic(5)))
    assert f.is_zero(f.from_poly(t ** 5 - 1))


def test_prime_specialization():
    assert prime_specialize(t - 1, 7, 1) == 0
    assert prime_specialize(t * t + t + 1, 7, 2) == 0
    with pytest.raises(OrderMismatch):
        prime_specialize(t, 5, 2, 8)
    with pytest.raises(BadPrime):
        PrimeField(9, 2)


def test_primes_for_order():
    for d in (1, 2, 5, 12):
        for q, r in primes_for_order(d):
            assert (q - 1) % d == 0
            assert pow(r, d, q) == 1
            assert all(pow(r, e, q) != 1 for e in range(1, d))


def test_rational_point():
    f = RationalPoint(1)
    assert f.from_poly(t ** 3 - 1) == 0
    g = RationalPoint(Fraction(1, 2))
    assert g.from_poly(t + LaurentPoly.monomial(1, -1)) == Fraction(5, 2)
    with pytest.raises(ValueError):
        RationalPoint(0)


def test_field_tags():
    assert field_from_tag("q1") == RationalPoint(1)
    assert field_from_tag("cyc:6") == CyclotomicField(6)
    with pytest.raises(ParseError):
        field_from_tag("cyc:x")
