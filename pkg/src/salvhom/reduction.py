"""Chain-level Gaussian elimination on unit entries.

If ``<d c, f> = u`` is a unit, the pair ``(c, f)`` can be cancelled: every
other coface ``x`` of ``f`` gets ``d x -= (<d x, f> / u) d c`` and both cells
disappear.  The result is chain homotopy equivalent to the input over the
coefficient ring, and because the pivots stay units under every
specialization ``t -> zeta`` the reduction commutes with specialization.

Pivots are chosen greedily by Markowitz cost, preferring ``+-t^k`` so that
Laurent entries keep integer coefficients as long as possible.
"""

from fractions import Fraction
from heapq import heappop, heappush

from .fields import RationalPoint
from .laurent import LaurentPoly, _coef
from .salvetti import LAURENT, ChainComplex


class _LaurentOps:
    # entries are raw exponent -> coefficient dicts

    @staticmethod
    def wrap_in(p):
        return dict(p._c)

    @staticmethod
    def wrap_out(d):
        return LaurentPoly._raw(d)

    @staticmethod
    def rank(p):
        """0 for +-t^k, 1 for other units, None for non-units."""
        if len(p) != 1:
            return None
        (v,) = p.values()
        return 0 if v == 1 or v == -1 else 1

    @staticmethod
    def factor(a, p):
        # -a / p for a unit p
        ((e0, u),) = p.items()
        if u == 1:
            return {e - e0: -v for e, v in a.items()}
        if u == -1:
            return {e - e0: v for e, v in a.items()}
        return {e - e0: _coef(Fraction(-v) / u) for e, v in a.items()}

    @staticmethod
    def axpy(x, q, f):
        # x + q*f, or None when zero; x may be None
        r = dict(x) if x else {}
        for e1, c1 in f.items():
            for e2, c2 in q.items():
                e = e1 + e2
                v = r.get(e, 0) + c1 * c2
                if v:
                    r[e] = v
                else:
                    r.pop(e, None)
        return r or None


class _FieldOps:
    def __init__(self, field):
        self.field = field
        self.cheap = (field.one, field.neg(field.one))

    @staticmethod
    def wrap_in(v):
        return v

    @staticmethod
    def wrap_out(v):
        return v

    def rank(self, v):
        return 0 if v in self.cheap else 1

    def factor(self, a, p):
        f = self.field
        return f.neg(f.mul(a, f.inv(p)))

    def axpy(self, x, q, f):
        fl = self.field
        prod = fl.mul(q, f)
        r = prod if x is None else fl.add(x, prod)
        return None if fl.is_zero(r) else r


class _RationalOps(_FieldOps):
    # plain ints and Fractions, skipping the field wrapper

    @staticmethod
    def rank(v):
        return 0 if v == 1 or v == -1 else 1

    @staticmethod
    def factor(a, p):
        if p == 1 or p == -1:
            return -a * p
        r = Fraction(-a) / p
        return r.numerator if r.denominator == 1 else r

    @staticmethod
    def axpy(x, q, f):
        r = q * f if x is None else x + q * f
        if not r:
            return None
        if type(r) is Fraction and r.denominator == 1:
            return r.numerator
        return r


class _PivotQueue:
    """Bucket queue of candidate pivots keyed by (rank, Markowitz cost).

    Costs above ``CAP`` share the last bucket.  Within a bucket the lowest
    ``(c, f)`` comes first; insertion order instead lets Laurent entries
    fill in badly.  Entries are never removed in place; the caller skips
    stale ones when they come up.
    """
    CAP = 4096

    def __init__(self):
        self.buckets = ([], [])
        self.low = [0, 0]
        self.count = [0, 0]

    def __len__(self):
        return self.count[0] + self.count[1]

    def push(self, r, cost, c, f):
        cost = min(cost, self.CAP)
        b = self.buckets[r]
        while len(b) <= cost:
            b.append([])
        heappush(b[cost], (c, f))
        if cost < self.low[r]:
            self.low[r] = cost
        self.count[r] += 1

    def pop(self):
        r = 0 if self.count[0] else 1
        b = self.buckets[r]
        i = self.low[r]
        while not b[i]:
            i += 1
        self.low[r] = i
        self.count[r] -= 1
        c, f = heappop(b[i])
        return r, i, c, f


def _ops(ring):
    if ring == LAURENT:
        return _LaurentOps()
    if isinstance(ring, RationalPoint):
        return _RationalOps(ring)
    return _FieldOps(ring)


def reduce_complex(cx, max_pairs=None):
    """Cancel unit pairs until none are left; returns a new ``ChainComplex``
    whose bases are the surviving cells (original labels).

    ``meta["pairs_by_degree"][h]`` counts cancellations between degrees
    ``h`` and ``h-1``; over a field that is the rank of ``d_h`` once the
    reduction has run to completion.  ``max_pairs`` stops early.
    """
    ops = _ops(cx.ring)
    top = cx.top
    starts = [0]
    for h in range(top + 1):
        starts.append(starts[-1] + cx.size(h))
    total = starts[-1]
    bd = [None] * total
    for h in range(top + 1):
        base = starts[h]
        if h == 0:
            for j in range(cx.size(0)):
                bd[base + j] = {}
            continue
        lower = starts[h - 1]
        win = ops.wrap_in
        for j, col in enumerate(cx.boundaries[h]):
            bd[base + j] = {lower + i: win(v) for i, v in col.items()}

    cob = [set() for _ in range(total)]
    for c, d in enumerate(bd):
        for f in d:
            cob[f].add(c)

    rank = ops.rank
    queue = _PivotQueue()
    for c, d in enumerate(bd):
        for f, p in d.items():
            r = rank(p)
            if r is not None:
                queue.push(r, (len(cob[f]) - 1) * (len(d) - 1), c, f)

    degree = []
    for h in range(top + 1):
        degree.extend([h] * cx.size(h))
    by_degree = [0] * (top + 1)
    alive = [True] * total
    pairs = 0
    while queue and (max_pairs is None or pairs < max_pairs):
        r0, k, c, f = queue.pop()
        if not (alive[c] and alive[f]):
            continue
        bc = bd[c]
        p = bc.get(f)
        if p is None:
            continue
        r = rank(p)
        if r is None or r != r0:
            continue
        cost = (len(cob[f]) - 1) * (len(bc) - 1)
        if min(cost, _PivotQueue.CAP) > k:
            queue.push(r, cost, c, f)
            continue
        for x in cob[f]:
            if x == c:
                continue
            dx = bd[x]
            fac = ops.factor(dx.pop(f), p)
            for g, q in bc.items():
                if g == f:
                    continue
                old = dx.get(g)
                nv = ops.axpy(old, q, fac)
                if nv is None:
                    if old is not None:
                        del dx[g]
                        cob[g].discard(x)
                else:
                    if old is None:
                        cob[g].add(x)
                    dx[g] = nv
                    nr = rank(nv)
                    # an entry of unchanged rank is already queued; its cost
                    # is refreshed when it comes up
                    if nr is not None and (old is None or nr != rank(old)):
                        queue.push(nr, (len(cob[g]) - 1) * (len(dx) - 1), x, g)
        for g in bc:
            if g != f:
                cob[g].discard(c)
        for y in cob[c]:
            del bd[y][c]
        for g in bd[f]:
            cob[g].discard(f)
        alive[c] = alive[f] = False
        bd[c] = bd[f] = None
        cob[c] = cob[f] = None
        pairs += 1
        by_degree[degree[c]] += 1

    bases, boundaries, newpos = [], [], {}
    wout = ops.wrap_out
    for h in range(top + 1):
        keep = [i for i in range(starts[h], starts[h + 1]) if alive[i]]
        for j, i in enumerate(keep):
            newpos[i] = j
        bases.append([cx.bases[h][i - starts[h]] for i in keep])
        if h == 0:
            boundaries.append([])
        else:
            boundaries.append([{newpos[g]: wout(v) for g, v in bd[i].items()} for i in keep])
    meta = dict(cx.meta)
    meta["pairs"] = meta.get("pairs", 0) + pairs
    prior = meta.get("pairs_by_degree", [0] * (top + 1))
    meta["pairs_by_degree"] = [a + b for a, b in zip(prior, by_degree)]
    meta["reduced"] = True
    return ChainComplex(bases, boundaries, cx.ring, cx.system, cx.spec,
                        cx.valid_top, cx.offset, meta)
