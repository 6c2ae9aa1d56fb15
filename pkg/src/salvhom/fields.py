"""Scalar fields that ``Q[t, t^-1]`` specializes to.

* ``CyclotomicField(d)``: ``F_d = Q[t]/(phi_d)``, exact.
* ``RationalPoint(x)``: ``t -> x`` for a nonzero rational ``x`` (``x = 1``
  is the untwisted specialization).
* ``PrimeField(q, r)``: ``t -> r`` in ``Z/q``; with ``r`` of multiplicative
  order ``d`` this is a surrogate for ``F_d`` used by the modular mode.

Fields work on raw element values so the elimination loops stay cheap; the
``CycScalar`` wrapper gives the operator syntax for interactive use.
"""

from fractions import Fraction
from math import gcd

from .errors import BadPrime, InverseOfZero, OrderMismatch, ParseError
from .laurent import LaurentPoly, _divmod_lists, cyclotomic, totient


def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _mul_lists(a, b):
    out = [Fraction(0)] * max(len(a) + len(b) - 1, 0)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def _sub_lists(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for i, v in enumerate(b):
        a[i] -= v
    return a


class CyclotomicField:
    """``Q[t]/(phi_d)``.  Elements are ``(nums, den)``: integer coefficient
    tuple of length ``phi(d)`` over a positive common denominator, reduced."""

    def __init__(self, d):
        if d < 1:
            raise ValueError(f"cyclotomic index must be positive, got {d}")
        self.d = d
        self.m = m = totient(d)
        phi = cyclotomic(d)
        coeffs = [int(phi.coeff(i)) for i in range(m + 1)]
        # rows[j] = t^(m + j) mod phi_d, for j < m - 1
        power = [-c for c in coeffs[:m]]
        rows = []
        for _ in range(max(m - 1, 0)):
            rows.append(tuple(power))
            top = power[-1]
            power = [0] + power[:-1]
            power = [power[i] - top * coeffs[i] for i in range(m)]
        self._rows = rows
        self.zero = ((0,) * m, 1)
        self.one = ((1,) + (0,) * (m - 1), 1)
        self.tag = f"cyc:{d}"

    def __repr__(self):
        return f"CyclotomicField({self.d})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.d == self.d

    def __hash__(self):
        return hash(("cyc", self.d))

    @staticmethod
    def _norm(nums, den):
        g = den
        for x in nums:
            if x:
                g = gcd(g, x)
                if g == 1:
                    return tuple(nums), den
        if not any(nums):
            return tuple(0 for _ in nums), 1
        return tuple(x // g for x in nums), den // g

    def is_zero(self, a):
        return not any(a[0])

    def add(self, a, b):
        (x, p), (y, q) = a, b
        if p == q:
            return self._norm([u + v for u, v in zip(x, y)], p)
        return self._norm([u * q + v * p for u, v in zip(x, y)], p * q)

    def neg(self, a):
        return tuple(-u for u in a[0]), a[1]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        (x, p), (y, q) = a, b
        m = self.m
        prod = [0] * (2 * m - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    if v:
                        prod[i + j] += u * v
        out = prod[:m]
        for j, c in enumerate(prod[m:]):
            if c:
                row = self._rows[j]
                for i in range(m):
                    out[i] += c * row[i]
        return self._norm(out, p * q)

    def inv(self, a):
        if self.is_zero(a):
            raise InverseOfZero("zero has no inverse")
        # extended Euclid of a against phi_d in Q[t], on coefficient lists
        phi = cyclotomic(self.d)
        r0 = [Fraction(phi.coeff(i)) for i in range(self.m + 1)]
        r1 = _trim([Fraction(c, a[1]) for c in a[0]])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _divmod_lists(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _trim(_sub_lists(s0, _mul_lists(q, s1)))
        # r1 = [c]: s1 * a = c mod phi_d
        c = r1[0]
        return self.from_poly(LaurentPoly.from_coeffs([x / c for x in s1]))

    def from_int(self, c):
        return self._norm([c] + [0] * (self.m - 1), 1)

    def from_poly(self, p):
        """Reduce a Laurent polynomial modulo ``phi_d``."""
        if p.is_zero():
            return self.zero
        m = self.m
        lo = min(p.min_exp, 0)
        # t^-1 is a unit: shift by a multiple of d (t^d = 1 mod phi_d)
        shift = (-lo + self.d - 1) // self.d * self.d if lo < 0 else 0
        den = 1
        for v in p._c.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        top = p.max_exp + shift
        work = [0] * max(top + 1, m)
        for e, v in p._c.items():
            work[e + shift] += int(v * den)
        # reduce degrees >= m using t^m = -(lower terms of phi_d)
        coeffs = [int(cyclotomic(self.d).coeff(i)) for i in range(m)]
        for k in range(len(work) - 1, m - 1, -1):
            c = work[k]
            if c:
                work[k] = 0
                for i in range(m):
                    work[k - m + i] -= c * coeffs[i]
        return self._norm(work[:m], den)

    def to_poly(self, a):
        nums, den = a
        return LaurentPoly((i, Fraction(c, den)) for i, c in enumerate(nums))

    def tau(self):
        return self.from_poly(LaurentPoly.tau())

    def to_text(self, a):
        return self.to_poly(a).to_text()

    def from_text(self, text, line=None):
        p = LaurentPoly.from_text(text, line)
        if p.min_exp is not None and (p.min_exp < 0 or p.max_exp >= self.m):
            raise ParseError(f"entry {text!r} is not reduced modulo phi_{self.d}", line)
        return self.from_poly(p)


class RationalPoint:
    """Evaluation ``t -> x`` into ``Q``.  Elements are ints or Fractions."""

    zero = 0
    one = 1

    def __init__(self, x):
        x = Fraction(x)
        if x == 0:
            raise ValueError("t must specialize to a unit")
        self.x = x
        self.tag = "q1" if x == 1 else f"qpt:{x}"

    def __repr__(self):
        return f"RationalPoint({self.x})"

    def __eq__(self, other):
        return isinstance(other, RationalPoint) and other.x == self.x

    def __hash__(self):
        return hash(("qpt", self.x))

    @staticmethod
    def _c(v):
        return v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return self._c(a + b)

    def sub(self, a, b):
        return self._c(a - b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return self._c(a * b)

    def inv(self, a):
        if a == 0:
            raise InverseOfZero("zero has no inverse")
        return self._c(Fraction(1) / Fraction(a))

    def from_int(self, c):
        return c

    def from_poly(self, p):
        x = self.x
        if x == 1:
            return self._c(sum(p._c.values()))
        total = Fraction(0)
        for e, v in p._c.items():
            total += v * x ** e
        return self._c(total)

    def to_text(self, a):
        return LaurentPoly.monomial(a, 0).to_text()

    def from_text(self, text, line=None):
        p = LaurentPoly.from_text(text, line)
        if p.min_exp is not None and (p.min_exp, p.max_exp) != (0, 0):
            raise ParseError(f"entry {text!r} is not a constant", line)
        return self._c(p.coeff(0))


def multiplicative_order(r, q):
    r %= q
    if r == 0:
        raise BadPrime(f"{r} is not a unit mod {q}")
    k, x = 1, r
    while x != 1:
        x = x * r % q
        k += 1
    return k


def _is_prime(q):
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """``t -> r`` in ``Z/q``.  Elements are ints in ``[0, q)``."""

    zero = 0
    one = 1

    def __init__(self, q, r, d=None):
        if not _is_prime(q):
            raise BadPrime(f"{q} is not prime")
        if r % q == 0:
            raise BadPrime(f"{r} is not a unit mod {q}")
        if d is not None:
            if (q - 1) % d:
                raise OrderMismatch(f"no element of order {d} mod {q}: {d} does not divide {q - 1}")
            if multiplicative_order(r, q) != d:
                raise OrderMismatch(f"{r} does not have order {d} mod {q}")
        self.q, self.r, self.d = q, r % q, d
        self._rinv = pow(self.r, -1, q)
        self.tag = f"mod:{q}:{self.r}"

    def __repr__(self):
        return f"PrimeField({self.q}, {self.r})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and (other.q, other.r) == (self.q, self.r)

    def __hash__(self):
        return hash(("mod", self.q, self.r))

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return -a % self.q

    def mul(self, a, b):
        return a * b % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise InverseOfZero("zero has no inverse")
        return pow(a, -1, self.q)

    def from_int(self, c):
        return c % self.q

    def from_poly(self, p):
        q = self.q
        total = 0
        for e, v in p._c.items():
            v = Fraction(v)
            if v.denominator % q == 0:
                raise BadPrime(f"{q} divides the denominator of {v}")
            base = self.r if e >= 0 else self._rinv
            total += v.numerator * pow(v.denominator, -1, q) * pow(base, abs(e), q)
        return total % q

    def to_text(self, a):
        return LaurentPoly.monomial(a, 0).to_text()

    def from_text(self, text, line=None):
        p = LaurentPoly.from_text(text, line)
        if p.min_exp is not None and (p.min_exp, p.max_exp) != (0, 0):
            raise ParseError(f"entry {text!r} is not a constant", line)
        return self.from_poly(p)


def prime_specialize(p, q, r, d=None):
    """Evaluate ``p`` at ``t = r`` in ``Z/q``; ``d`` asks for ``ord(r) = d``."""
    return PrimeField(q, r, d).from_poly(p)


def primes_for_order(d, count=2, start=1_000_000):
    """``count`` pairs ``(q, r)`` with ``q = 1 mod d`` prime and ``r`` of order ``d``."""
    out = []
    q = start - start % d + 1
    while len(out) < count:
        if q > 2 and _is_prime(q):
            g = 2
            while True:
                r = pow(g, (q - 1) // d, q)
                if multiplicative_order(r, q) == d:
                    out.append((q, r))
                    break
                g += 1
        q += d
    return out


def field_from_tag(tag):
    """Parse an LSM ring tag (``cyc:<d>``, ``mod:<q>:<r>``, ``q1``)."""
    if tag == "q1":
        return RationalPoint(1)
    parts = tag.split(":")
    try:
        if parts[0] == "cyc" and len(parts) == 2:
            return CyclotomicField(int(parts[1]))
        if parts[0] == "mod" and len(parts) == 3:
            return PrimeField(int(parts[1]), int(parts[2]))
        if parts[0] == "qpt" and len(parts) == 2:
            return RationalPoint(Fraction(parts[1]))
    except ValueError:
        pass
    raise ParseError(f"unknown ring tag {tag!r}")


class CycScalar:
    """An element of ``F_d`` with operator syntax.

    >>> t = CycScalar.tau(3)
    >>> t.inverse() == CycScalar.from_poly(-LaurentPoly.tau() - 1, 3)
    True
    """

    __slots__ = ("field", "value")

    _fields = {}

    def __init__(self, field, value):
        self.field = field
        self.value = value

    @classmethod
    def _field(cls, d):
        if d not in cls._fields:
            cls._fields[d] = CyclotomicField(d)
        return cls._fields[d]

    @classmethod
    def from_poly(cls, p, d):
        f = cls._field(d)
        return cls(f, f.from_poly(p))

    @classmethod
    def tau(cls, d):
        return cls.from_poly(LaurentPoly.tau(), d)

    @property
    def d(self):
        return self.field.d

    def _check(self, other):
        if not isinstance(other, CycScalar):
            other = CycScalar.from_poly(LaurentPoly.coerce(other), self.d)
        if other.d != self.d:
            raise ValueError("elements of different cyclotomic fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycScalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return CycScalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return CycScalar(self.field, self.field.mul(self.value, other.value))

    def __neg__(self):
        return CycScalar(self.field, self.field.neg(self.value))

    def inverse(self):
        return CycScalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def to_poly(self):
        return self.field.to_poly(self.value)

    def __eq__(self, other):
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.d == other.d and self.value == other.value

    def __hash__(self):
        return hash((self.d, self.value))

    def __repr__(self):
        return f"CycScalar({self.to_poly()} mod phi_{self.d})"


def specialize(p, d):
    """Residue of ``p`` in ``F_d``."""
    return CycScalar.from_poly(p, d)
