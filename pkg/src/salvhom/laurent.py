"""Exact arithmetic in the Laurent ring ``Q[t, t^-1]`` and cyclotomic factors.

A ``LaurentPoly`` is an immutable sparse map ``exponent -> coefficient``
with rational coefficients and no stored zeros:

>>> t = LaurentPoly.tau()
>>> (t - 1) * (t + 1)
LaurentPoly('t^2 - 1')
>>> LaurentPoly.monomial(1, -1) * t
LaurentPoly('1')

Units of the ring are the monomials ``c t^k``.  Division and gcd work on the
polynomial obtained by shifting the minimal exponent to zero, which is how
the localization ``Q[t][1/t]`` is handled throughout.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BothZero, DivisionByZero, NonCyclotomicFactor, ParseError


def _coef(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    return _coef(Fraction(c))


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, terms=None):
        c = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, v in items:
                v = _coef(v)
                if v:
                    e = int(e)
                    s = c.get(e, 0) + v
                    if s:
                        c[e] = s
                    else:
                        del c[e]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c):
        # trusted constructor: c is a normalized dict that we take ownership of
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({0: 1})

    @classmethod
    def tau(cls):
        return cls._raw({1: 1})

    @classmethod
    def monomial(cls, coef, exp):
        coef = _coef(coef)
        return cls._raw({int(exp): coef} if coef else {})

    @classmethod
    def from_coeffs(cls, coeffs, shift=0):
        """``sum coeffs[i] t^(i+shift)``, lowest degree first."""
        return cls((i + shift, v) for i, v in enumerate(coeffs))

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentPoly):
            return x
        return cls.monomial(x, 0)

    # --- inspection -----------------------------------------------------------

    def terms(self):
        """``(exponent, coefficient)`` pairs by increasing exponent."""
        return sorted(self._c.items())

    def coeff(self, e):
        return self._c.get(e, 0)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    @property
    def min_exp(self):
        return min(self._c) if self._c else None

    @property
    def max_exp(self):
        return max(self._c) if self._c else None

    @property
    def span(self):
        """Degree after shifting the minimal exponent to zero (-1 for zero)."""
        if not self._c:
            return -1
        return self.max_exp - self.min_exp

    def leading(self):
        return self._c[self.max_exp]

    def is_unit(self):
        return len(self._c) == 1

    def is_monomial_pm1(self):
        if len(self._c) != 1:
            return False
        (v,) = self._c.values()
        return v == 1 or v == -1

    # --- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                s = c.get(e, 0) + v1 * v2
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        return LaurentPoly._raw({e: _coef(v) for e, v in c.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if not self.is_unit():
                raise DivisionByZero("only units have negative powers")
            ((e, v),) = self._c.items()
            return LaurentPoly.monomial(Fraction(1) / Fraction(v) ** -k, e * k)
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k):
        """Multiply by ``t^k``."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def scale(self, c):
        c = _coef(c)
        if not c:
            return LaurentPoly.zero()
        return LaurentPoly._raw({e: _coef(v * c) for e, v in self._c.items()})

    def unit_inverse(self):
        if not self.is_unit():
            raise DivisionByZero(f"{self} is not a unit")
        ((e, v),) = self._c.items()
        return LaurentPoly.monomial(Fraction(1) / Fraction(v), -e)

    def normalized(self):
        """Shift to minimal exponent 0 and make monic (zero stays zero)."""
        if not self._c:
            return self
        return self.shift(-self.min_exp).scale(Fraction(1) / Fraction(self.leading()))

    def __call__(self, x):
        """Evaluate at ``x`` (anything supporting ``*``, ``+`` and ``**``)."""
        total = 0
        for e, v in self._c.items():
            total = total + v * x ** e
        return total

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # --- text forms -----------------------------------------------------------

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            mag = abs(v)
            sign = "-" if v < 0 else "+"
            if e == 0:
                body = str(mag)
            else:
                mono = "t" if e == 1 else f"t^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def to_text(self):
        """Comma-separated ``exp:num/den`` terms, exponents increasing."""
        out = []
        for e, v in sorted(self._c.items()):
            v = Fraction(v)
            out.append(f"{e}:{v.numerator}/{v.denominator}")
        return ",".join(out) if out else "0"

    @classmethod
    def from_text(cls, text, line=None):
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms = {}
        last = None
        for tok in text.split(","):
            try:
                e, frac = tok.split(":")
                num, den = frac.split("/")
                e, num, den = int(e), int(num), int(den)
            except ValueError:
                raise ParseError(f"malformed term {tok!r}", line) from None
            if den <= 0:
                raise ParseError(f"bad denominator in {tok!r}", line)
            if last is not None and e <= last:
                raise ParseError("exponents must be strictly increasing", line)
            if num == 0:
                raise ParseError(f"zero coefficient in {tok!r}", line)
            last = e
            terms[e] = Fraction(num, den)
        return cls(terms)


# --- Euclidean structure ----------------------------------------------------------

def _poly_list(p):
    # coefficients of the shifted polynomial, lowest first (as Fractions)
    lo = p.min_exp
    out = [Fraction(0)] * (p.span + 1)
    for e, v in p._c.items():
        out[e - lo] = Fraction(v)
    return out


def _divmod_lists(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            f = c / lead
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    r = a[:db] if db else []
    return q, r


def lp_add(a, b):
    return a + b


def lp_mul(a, b):
    return a * b


def lp_neg(a):
    return -a


def lp_divmod(a, b):
    """``(q, r)`` with ``a = q*b + r`` and ``span(r) < span(b)``."""
    if b.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if a.is_zero():
        return LaurentPoly.zero(), LaurentPoly.zero()
    alpha, beta = a.min_exp, b.min_exp
    q, r = _divmod_lists(_poly_list(a), _poly_list(b))
    q = LaurentPoly.from_coeffs(q, alpha - beta)
    r = LaurentPoly.from_coeffs(r, alpha)
    return q, r


def lp_gcd(a, b):
    """Monic gcd with minimal exponent 0 (the gcd up to units of the ring)."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while not b.is_zero():
        _, r = lp_divmod(a, b)
        a, b = b, r
    return a.normalized()


def lp_divides(b, a):
    return lp_divmod(a, b)[1].is_zero()


def lp_exact_div(a, b):
    q, r = lp_divmod(a, b)
    if not r.is_zero():
        raise DivisionByZero(f"{b} does not divide {a}")
    return q


# --- cyclotomic polynomials -------------------------------------------------------

def divisors(m):
    small = [d for d in range(1, int(m ** 0.5) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def totient(d):
    result, m, p = d, d, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(d):
    """The d-th cyclotomic polynomial, monic (so ``cyclotomic(1) = t - 1``)."""
    if d < 1:
        raise ValueError(f"cyclotomic index must be positive, got {d}")
    p = LaurentPoly({d: 1, 0: -1})
    for e in divisors(d)[:-1]:
        p = lp_exact_div(p, cyclotomic(e))
    return p


@dataclass(frozen=True, order=True)
class TorsionFactor:
    """``{phi_d}^multiplicity``, or an exponent of ``phi_d`` in a factorization."""
    d: int
    multiplicity: int


def cyclotomic_part(p):
    """Split ``p = unit * C * J`` with ``C`` the largest product of cyclotomic
    polynomials dividing ``p`` and ``J`` free of cyclotomic factors.

    Returns ``(C, factors, J)`` with ``C`` monic integral, ``factors`` as in
    ``factor_unity`` and ``J`` normalized.
    """
    if p.is_zero():
        raise DivisionByZero("zero has no cyclotomic part")
    rest = p.normalized()
    factors = []
    bound = rest.span
    d = 1
    while d <= 2 * bound * bound + 2 and rest.span > 0:
        if totient(d) <= rest.span:
            phi = cyclotomic(d)
            e = 0
            while True:
                q, r = lp_divmod(rest, phi)
                if not r.is_zero():
                    break
                rest, e = q, e + 1
            if e:
                factors.append(TorsionFactor(d, e))
        d += 1
    c = LaurentPoly.one()
    for f in factors:
        c = c * cyclotomic(f.d) ** f.multiplicity
    return c, factors, rest.normalized()


def factor_unity(p):
    """Split ``p = unit * prod phi_d^e_d``.

    Returns ``(unit, factors)`` with ``unit = c t^k`` and ``factors`` a sorted
    list of ``TorsionFactor(d, e_d)``.  Raises ``NonCyclotomicFactor`` if a
    root of ``p`` is not a root of unity.
    """
    if p.is_zero():
        raise DivisionByZero("cannot factor zero")
    unit = LaurentPoly.monomial(p.leading(), p.min_exp)
    rest = p.normalized()
    factors = []
    d = 1
    # phi(d) >= sqrt(d/2), so indices beyond 2*deg^2 cannot divide
    while rest.span > 0:
        if d > 2 * rest.span ** 2 + 2:
            raise NonCyclotomicFactor(f"{p} has the non-cyclotomic factor {rest}")
        if totient(d) <= rest.span:
            phi = cyclotomic(d)
            e = 0
            while True:
                q, r = lp_divmod(rest, phi)
                if not r.is_zero():
                    break
                rest, e = q, e + 1
            if e:
                factors.append(TorsionFactor(d, e))
        d += 1
    return unit * rest, factors
