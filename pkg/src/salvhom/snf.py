"""Smith normal form over ``R = Q[t, t^-1]``.

Three stages:

1. unit entries are cleared by sparse elimination, one invariant factor 1
   each;
2. entries dividing their whole row and column are split off with an exact
   Schur complement update;
3. the dense remainder is handled modulo a multiple of its invariant
   factors.  A nonzero maximal minor ``D`` (exact, fraction-free) bounds
   them; its cyclotomic part is a valid modulus once the rest of ``D`` is
   shown coprime to a second minor.  The Smith form then splits over the
   prime powers ``phi_d^e`` and each local exponent list comes out of one
   elimination pass over ``Z[t]/(phi_d^cap)``.

Invariant factors other than products of cyclotomic polynomials are
reported through ``NonCyclotomicFactor``.
"""

import random
from fractions import Fraction
from math import gcd

from . import config
from .errors import InconsistencyError, NonCyclotomicFactor, ResourceLimit
from .laurent import (LaurentPoly, cyclotomic, cyclotomic_part, factor_unity, lp_divides,
                      lp_exact_div, lp_gcd)
from .reduction import reduce_complex
from .salvetti import LAURENT, ChainComplex


def _clear_units(matrix):
    cx = ChainComplex([list(range(matrix.nrows)), list(range(matrix.ncols))],
                      [[], matrix.columns], LAURENT)
    reduced = reduce_complex(cx)
    units = reduced.meta["pairs_by_degree"][1]
    cols = {j: dict(col) for j, col in enumerate(reduced.boundaries[1]) if col}
    return units, len(reduced.bases[0]), len(reduced.bases[1]), cols


def _clear_divisors(cols):
    """Eliminate entries dividing everything in their row and column.

    Such a pivot ``p`` is split off as a diagonal entry and the rest of
    the matrix gets the exact Schur complement update.  Returns the
    diagonal entries found; ``cols`` is modified in place.
    """
    rows = {}
    for j, col in cols.items():
        for i in col:
            rows.setdefault(i, set()).add(j)
    found = []
    progress = True
    while progress:
        progress = False
        order = sorted(((v.span, len(v), j, i) for j, col in cols.items()
                        for i, v in col.items()))
        for _, _, j, i in order:
            col = cols.get(j)
            if col is None or i not in col:
                continue
            p = col[i]
            row_js = [k for k in rows[i] if k != j]
            if any(not lp_divides(p, col[r]) for r in col if r != i):
                continue
            if any(not lp_divides(p, cols[k][i]) for k in row_js):
                continue
            factors = {r: lp_exact_div(v, p) for r, v in col.items() if r != i}
            for k in row_js:
                ck = cols[k]
                b = ck.pop(i)
                for r, f in factors.items():
                    nv = ck.get(r, LaurentPoly.zero()) - f * b
                    if nv:
                        if r not in ck:
                            rows[r].add(k)
                        ck[r] = nv
                    elif r in ck:
                        del ck[r]
                        rows[r].discard(k)
                if not ck:
                    del cols[k]
            for r in col:
                rows[r].discard(j)
            del cols[j]
            del rows[i]
            found.append(p)
            progress = True
    return found


def _dense(cols):
    row_ids = sorted({i for col in cols.values() for i in col})
    pos = {i: n for n, i in enumerate(row_ids)}
    col_ids = sorted(cols)
    dense = [[LaurentPoly.zero()] * len(col_ids) for _ in row_ids]
    for n, j in enumerate(col_ids):
        for i, v in cols[j].items():
            dense[pos[i]][n] = v
    return dense


# The dense stage works on integer Laurent polynomials stored as plain
# ``{exponent: int}`` dicts.  Rows and columns are only ever multiplied by
# units ``c t^k`` (c rational) or combined, so invariant factors are kept.

def _to_int_rows(dense):
    rows = []
    for row in dense:
        den = 1
        for v in row:
            for c in v._c.values():
                if isinstance(c, Fraction):
                    den = den * c.denominator // gcd(den, c.denominator)
        rows.append([{e: int(c * den) for e, c in v._c.items()} for v in row])
    return rows


def _eval_mod(v, x, q):
    total = 0
    for e, c in v._c.items():
        c = Fraction(c)
        total += c.numerator * pow(c.denominator, -1, q) * pow(x, e, q)
    return total % q


def _pivots(dense, rng, shuffle=False):
    """Pivot positions of the dense block evaluated at a random point mod a
    large prime.  Their count is the generic rank with high probability and
    is never more than it."""
    q = config.GENERIC_PRIME
    x = rng.randrange(2, q - 1)
    ri, ci = list(range(len(dense))), list(range(len(dense[0])))
    if shuffle:
        rng.shuffle(ri)
        rng.shuffle(ci)
    rows = [[_eval_mod(dense[i][j], x, q) for j in ci] for i in ri]
    used = [False] * len(rows)
    found = []
    for cj in range(len(ci)):
        p = next((i for i in range(len(rows)) if not used[i] and rows[i][cj]), None)
        if p is None:
            continue
        used[p] = True
        inv = pow(rows[p][cj], -1, q)
        for i in range(len(rows)):
            if not used[i] and rows[i][cj]:
                f = rows[i][cj] * inv % q
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[p])]
        found.append((ri[p], ci[cj]))
    return found


def _minor(dense, pivots):
    """Exact determinant of the submatrix on ``pivots`` (fraction-free Bareiss)."""
    rows = sorted(i for i, _ in pivots)
    cols = sorted(j for _, j in pivots)
    m = [[dense[i][j] for j in cols] for i in rows]
    n = len(m)
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            s = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if s is None:
                return LaurentPoly.zero()
            m[k], m[s] = m[s], m[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = lp_exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    return m[n - 1][n - 1]


class _Quotient:
    """Arithmetic in ``Z[t]/(C)`` for a monic ``C`` with constant term +-1,
    so ``t`` is invertible and integer coefficients stay integral."""

    def __init__(self, c):
        self.n = c.span
        self.c = [int(c._c.get(e, 0)) for e in range(self.n + 1)]
        c0 = self.c[0]
        self._neg = {0: {0: 1}}
        # C = c0 + t*Q with c0 = +-1, so t^-1 = -c0*Q mod C
        self._tinv = {i: -c0 * self.c[i + 1] for i in range(self.n) if self.c[i + 1]}

    def _neg_power(self, k):
        while k not in self._neg:
            j = max(self._neg)
            self._neg[j + 1] = self.reduce(_mul(self._neg[j], self._tinv))
        return self._neg[k]

    def reduce(self, v):
        if not v:
            return v
        n, c = self.n, self.c
        out = {}
        for e, x in v.items():
            if e < 0:
                for f, y in self._neg_power(-e).items():
                    out[f] = out.get(f, 0) + x * y
            else:
                out[e] = out.get(e, 0) + x
        out = {e: x for e, x in out.items() if x}
        if not out:
            return out
        top = max(out)
        if top >= n:
            a = [0] * (top + 1)
            for e, x in out.items():
                a[e] = x
            for k in range(top, n - 1, -1):
                f = a[k]
                if f:
                    for i in range(n + 1):
                        a[k - n + i] -= f * c[i]
            out = dict(enumerate(a[:n]))
        return {e: x for e, x in out.items() if x}


def _mul(x, y):
    out = {}
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _content_normalize(entries):
    g = 0
    for v in entries:
        for c in v.values():
            g = gcd(g, c)
    if g > 1:
        return [{e: c // g for e, c in v.items()} if v else v for v in entries]
    return entries


def _power(phi, k):
    out = {0: 1}
    for _ in range(k):
        out = _mul(out, phi)
    return out


def _axpy(u, x, b, y):
    # u*x - b*y
    out = _mul(u, x) if x else {}
    for e1, c1 in b.items():
        for e2, c2 in y.items():
            out[e1 + e2] = out.get(e1 + e2, 0) - c1 * c2
    return {e: c for e, c in out.items() if c}


def _divmod_monic(v, phi):
    # v, phi: {exponent >= 0: int}, phi monic
    dp = max(phi)
    a = [0] * (max(v) + 1)
    for e, c in v.items():
        a[e] = c
    q = {}
    for k in range(len(a) - 1, dp - 1, -1):
        f = a[k]
        if f:
            q[k - dp] = f
            for e, c in phi.items():
                a[k - dp + e] -= f * c
    return q, {e: c for e, c in enumerate(a[:dp]) if c}


def _split_valuation(v, phi):
    # (k, u) with v = phi^k u and phi not dividing u
    k = 0
    while True:
        q, r = _divmod_monic(v, phi)
        if r:
            return k, v
        v, k = q, k + 1


def _local_exponents(dense, d, cap):
    """Exponents of ``phi_d`` in the invariant factors of ``dense`` computed
    in ``R/(phi_d^cap)``, one per row, a zero factor showing up as ``cap``.

    Locally every entry is ``phi^k`` times a unit, so pivoting on an entry of
    least ``k`` leaves the rest of its column divisible by the pivot and one
    fraction-free pass (rows scaled by local units) clears it.  The pivot row
    can then be dropped: clearing it by column operations would not touch
    anything else.
    """
    phi = {e: int(c) for e, c in cyclotomic(d)._c.items()}
    ring = _Quotient(cyclotomic(d) ** cap)
    rows = [_content_normalize([ring.reduce(v) for v in row]) for row in _to_int_rows(dense)]
    m = len(rows)
    exps = []
    while rows:
        best = None
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    k, u = _split_valuation(v, phi)
                    key = (k, len(v), max(abs(c) for c in v.values()).bit_length())
                    if best is None or key < best[0]:
                        best = (key, i, j, u)
        if best is None:
            break
        (k, _, _), i, j, u = best
        pivot = rows.pop(i)
        phik = _power(phi, k)
        for n, row in enumerate(rows):
            if row[j]:
                b = _divmod_monic(row[j], phik)[0]
                rows[n] = _content_normalize([ring.reduce(_axpy(u, x, b, y)) for x, y in zip(row, pivot)])
        for row in rows:
            del row[j]
        exps.append(k)
    return exps + [cap] * (m - len(exps))


def _dense_factors(dense, rng):
    """Nonzero invariant factors of a dense Laurent block.

    A nonzero maximal minor ``D`` is a multiple of every invariant factor.
    Its cyclotomic part ``C`` is one as well once the leftover of ``D`` is
    shown coprime to a second maximal minor, and then the Smith form can be
    computed mod ``C`` where degrees and coefficients stay bounded.
    """
    pivots = _pivots(dense, rng)
    r = len(pivots)
    if r == 0:
        return []
    det = _minor(dense, pivots)
    if det.is_zero():
        raise InconsistencyError("maximal minor vanished at its own pivots")
    c, factors, rest = cyclotomic_part(det)
    for _ in range(4):
        if rest.span == 0:
            break
        other = _pivots(dense, rng, shuffle=True)
        if len(other) == r:
            d2 = _minor(dense, other)
            if not d2.is_zero():
                rest = lp_gcd(rest, d2).normalized()
    else:
        if rest.span > 0:
            raise NonCyclotomicFactor(f"invariant factors share the factor {rest}")
    if c.span == 0:
        return [LaurentPoly.one()] * r
    # R/(C) splits into the local pieces R/(phi_d^e) (Chinese remainders)
    # and exponents are found mod phi_d^cap, raising the cap only while some
    # nonzero entry reaches it (a capped exponent below the cap is exact)
    columns = []
    for f in factors:
        cap = min(2, f.multiplicity)
        while True:
            col = sorted(_local_exponents(dense, f.d, cap))
            if cap == f.multiplicity or col[r - 1] < cap:
                break
            cap = min(2 * cap, f.multiplicity)
        if any(e != cap for e in col[r:]):
            raise InconsistencyError("generic rank estimate below the true rank")
        columns.append(col[:r])
    head = []
    for i in range(r):
        v = LaurentPoly.one()
        for col, f in zip(columns, factors):
            v = v * cyclotomic(f.d) ** col[i]
        head.append(v)
    return head


def _chain(factors):
    # all factors are cyclotomic products, so sorting the exponent of each
    # phi_d across the list yields d_1 | d_2 | ... for the same module
    split = [factor_unity(f)[1] for f in factors]
    ds = sorted({t.d for fl in split for t in fl})
    exps = [sorted(next((t.multiplicity for t in fl if t.d == d), 0) for fl in split)
            for d in ds]
    out = []
    for i in range(len(factors)):
        v = LaurentPoly.one()
        for d, col in zip(ds, exps):
            v = v * cyclotomic(d) ** col[i]
        out.append(v)
    return out


def snf(matrix, limit=None):
    """Invariant factors (one per unit of rank), monic with minimal exponent 0.

    >>> from salvhom.salvetti import SparseMatrix
    >>> t = LaurentPoly.tau()
    >>> m = SparseMatrix(2, 2, LAURENT, [{0: t - 1}, {0: t - 1, 1: t * t - 1}])
    >>> [str(f) for f in snf(m)]
    ['t - 1', 't^2 - 1']
    """
    limit = config.SNF_CELL_LIMIT if limit is None else limit
    if matrix.nrows + matrix.ncols > limit:
        raise ResourceLimit(f"{matrix.nrows}x{matrix.ncols} matrix exceeds the SNF bound {limit}")
    units, _, _, cols = _clear_units(matrix)
    split = _clear_divisors(cols)
    dense = _dense(cols)
    if len(dense) * (len(dense[0]) if dense else 0) > limit * 20:
        raise ResourceLimit(f"residual {len(dense)}x{len(dense[0])} block too large for dense SNF")
    rest = _dense_factors(dense, random.Random(config.SEED)) if dense else []
    return [LaurentPoly.one()] * units + _chain(split + rest)
