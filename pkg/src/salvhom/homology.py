"""Homology of Salvetti complexes as modules over ``R = Q[t, t^-1]``.

Two engines:

* ``homology_snf`` reads every degree off the Smith normal forms of the
  boundary matrices.  Exact and complete, but only for small complexes.
* ``homology_fieldrank`` specializes ``t`` to a primitive ``d``-th root of
  unity for each candidate ``d`` and inverts the universal coefficient
  relation ``dim H_k(C (x) F_d) = free_k + a_{d,k} + a_{d,k-1}``, where
  ``a_{d,k}`` counts the ``R/phi_d`` summands of ``H_k``.  This sees the
  number of ``phi_d``-primary summands but not their exponents, so it
  assumes squarefree torsion.

Field ranks are certified rather than computed in ``Q(zeta_d)`` whenever
possible: the image of a matrix in ``Z/q`` (``q = 1 mod d``, ``t`` sent to an
element of order ``d``) has rank at most the true rank, while
``rank d_h + rank d_{h+1} <= size_h`` bounds it from above.  Ranks where the
two bounds meet are exact; the rest are recomputed over ``Q(zeta_d)``.
"""

import random
import time
from fractions import Fraction
from dataclasses import dataclass, field

from . import config
from .coxeter import reflection_count
from .errors import (FreeRankNonzero, InconsistencyError, NegativeMultiplicity,
                     PrimeDisagreement, ResourceLimit, ShiftInvalid)
from .fields import CyclotomicField, PrimeField, RationalPoint, primes_for_order
from .laurent import TorsionFactor, divisors, factor_unity
from .linalg import matrix_rank, specialize_matrix
from .reduction import reduce_complex
from .salvetti import LAURENT, specialize_complex
from .snf import snf

GENERIC_PRIME = config.GENERIC_PRIME


# --- reports ----------------------------------------------------------------------

@dataclass
class DegreeHomology:
    """``H_k = R^free_rank + sum_d (R/phi_d)^mult + sum (R/phi_d^e)^count``.

    ``torsion`` lists the ``(d, mult)`` pairs with ``mult > 0``; ``higher``
    holds non-squarefree primary parts as ``(d, e, count)`` (only the SNF
    engine can see those).
    """
    k: int
    free_rank: int = 0
    torsion: list = field(default_factory=list)
    higher: list = field(default_factory=list)

    def multiplicity(self, d):
        for t in self.torsion:
            if t.d == d:
                return t.multiplicity
        return 0

    @property
    def is_zero(self):
        return not (self.free_rank or self.torsion or self.higher)

    @property
    def is_trivial(self):
        """A direct sum of copies of ``R/phi_1`` (zero included)."""
        return not self.free_rank and not self.higher and all(t.d == 1 for t in self.torsion)

    def same_module(self, other):
        return (self.k, self.free_rank, self.torsion, self.higher) == \
               (other.k, other.free_rank, other.torsion, other.higher)

    def scaled(self, m):
        return DegreeHomology(self.k, self.free_rank * m,
                              [TorsionFactor(t.d, t.multiplicity * m) for t in self.torsion],
                              [(d, e, c * m) for d, e, c in self.higher])

    def describe(self):
        parts = []
        if self.free_rank:
            parts.append("R" if self.free_rank == 1 else f"R^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"{{phi_{t.d}}}" + (f"^{t.multiplicity}" if t.multiplicity > 1 else ""))
        for d, e, c in self.higher:
            parts.append(f"(R/phi_{d}^{e})" + (f"^{c}" if c > 1 else ""))
        return " + ".join(parts) or "0"

    def to_dict(self):
        out = {"k": self.k, "free_rank": self.free_rank,
               "torsion": [{"d": t.d, "mult": t.multiplicity} for t in self.torsion]}
        if self.higher:
            out["higher"] = [{"d": d, "exp": e, "mult": c} for d, e, c in self.higher]
        return out


@dataclass
class HomologyReport:
    family: str
    rank: int
    complex: str
    method: str
    degrees: list
    kind: str = "homology"
    meta: dict = field(default_factory=dict)

    def __getitem__(self, k):
        for deg in self.degrees:
            if deg.k == k:
                return deg
        raise KeyError(k)

    def multiplicity(self, d, k):
        return self[k].multiplicity(d)

    def same_modules(self, other):
        return len(self.degrees) == len(other.degrees) and all(
            a.same_module(b) for a, b in zip(self.degrees, other.degrees))

    @property
    def squarefree(self):
        return all(not deg.higher for deg in self.degrees)

    def torsion_indices(self):
        ds = {t.d for deg in self.degrees for t in deg.torsion}
        ds |= {d for deg in self.degrees for d, _, _ in deg.higher}
        return sorted(ds)

    def describe(self):
        label = "H" if self.kind == "homology" else "H^"
        return "; ".join(f"{label}{deg.k} = {deg.describe()}" for deg in self.degrees)


@dataclass
class FieldDimTable:
    """``dims[k] = dim H_k(C (x) F_d)`` for ``k <= valid_top``."""
    d: int
    dims: tuple
    ranks: tuple
    sizes: tuple
    method: str
    primes: tuple = ()
    complete: bool = True

    def euler(self):
        return sum((-1) ** k * v for k, v in enumerate(self.dims))


def _report_header(cx):
    system = cx.system
    family = system.family if system else None
    rank = system.rank if system else None
    return family, rank, str(cx.spec or "full")


# --- SNF engine ---------------------------------------------------------------------

def homology_snf(cx, limit=None, prereduce=True):
    """Exact ``R``-module structure of every homology group of ``cx``.

    By default unit pairs are cancelled at chain level first (a homotopy
    equivalence over ``R``); with ``prereduce=False`` every boundary matrix
    of ``cx`` goes through ``snf`` as it is.
    """
    start = time.perf_counter()
    limit = config.SNF_CELL_LIMIT if limit is None else limit
    if cx.num_cells > limit:
        raise ResourceLimit(f"{cx.num_cells} cells exceed the SNF bound {limit}")
    if cx.ring != LAURENT:
        raise ValueError("the SNF engine needs a Laurent complex")
    source = cx
    cx = prepare(cx, prereduce)
    top = cx.valid_top
    factors = {}
    for h in range(1, min(top + 1, cx.top) + 1):
        factors[h] = snf(cx.matrix(h), limit)
    degrees = []
    for k in range(top + 1):
        r_k = len(factors.get(k, ()))
        upper = factors.get(k + 1, ())
        free = cx.size(k) - r_k - len(upper)
        counts, higher = {}, {}
        for f in upper:
            if f.span == 0:
                continue
            _, parts = factor_unity(f)
            for part in parts:
                if part.multiplicity == 1:
                    counts[part.d] = counts.get(part.d, 0) + 1
                else:
                    key = (part.d, part.multiplicity)
                    higher[key] = higher.get(key, 0) + 1
        degrees.append(DegreeHomology(
            k, free, [TorsionFactor(d, m) for d, m in sorted(counts.items())],
            [(d, e, c) for (d, e), c in sorted(higher.items())]))
    family, rank, spec = _report_header(source)
    return HomologyReport(family, rank, spec, "snf", degrees,
                          meta={"timing_ms": int(1000 * (time.perf_counter() - start))})


# --- field engine -------------------------------------------------------------------

def exact_field(d):
    return RationalPoint(1) if d == 1 else CyclotomicField(d)


def _certified(sizes, ranks):
    """Which entries of ``ranks`` (lower bounds) are forced to be exact."""
    n = len(sizes)
    r = list(ranks) + [0]
    ok = [False] * (n + 1)
    ok[0] = ok[n] = True
    for h in range(1, n):
        if r[h] == min(sizes[h], sizes[h - 1]):
            ok[h] = True
    for h in range(n):
        if r[h] + r[h + 1] == sizes[h]:
            ok[h] = ok[h + 1] = True
    return ok[:n]


def _residual_dims(sizes, ranks):
    r = list(ranks) + [0]
    return [sizes[h] - r[h] - r[h + 1] for h in range(len(sizes))]


def _ranks_over(cx, fieldobj):
    spec = specialize_complex(cx, fieldobj, check=False)
    reduced = reduce_complex(spec)
    prior = cx.meta.get("pairs_by_degree", [0] * (cx.top + 1))
    return [a - b for a, b in zip(reduced.meta["pairs_by_degree"], prior)]


def _certified_ranks(cx, d):
    """Exact ranks of the maps of ``cx`` over ``F_d``; ``cx`` is a Laurent complex."""
    sizes = cx.sizes()
    if d == 1:
        return _ranks_over(cx, RationalPoint(1)), "exact", ()
    q, r = primes_for_order(d, 1)[0]
    ranks = _ranks_over(cx, PrimeField(q, r, d))
    ok = _certified(sizes, ranks)
    target = None
    for h in range(1, len(sizes)):
        if ok[h]:
            continue
        # fall back to arithmetic in Q(zeta_d) for this map only
        target = target or exact_field(d)
        upper = min(sizes[h - 1] - ranks[h - 1],
                    sizes[h] - (ranks[h + 1] if h + 1 < len(sizes) else 0))
        ranks[h] = matrix_rank(specialize_matrix(cx.matrix(h), target), upper)
        ok = _certified(sizes, ranks)
        ok[h] = True
    return ranks, "certified", ((q, r),)


def _modular_ranks(cx, d, count=2):
    pairs = tuple(primes_for_order(d, count))
    results = [_ranks_over(cx, PrimeField(q, r, d)) for q, r in pairs]
    if any(res != results[0] for res in results[1:]):
        raise PrimeDisagreement(f"primes {pairs} disagree on ranks for d={d}: {results}")
    return results[0], "modular", pairs


def prepare(cx, prereduce=True):
    """Laurent complex to feed the field engine (cancelled unit pairs)."""
    if cx.ring != LAURENT:
        raise ValueError("the field engine needs a Laurent complex")
    if prereduce and not cx.meta.get("reduced"):
        return reduce_complex(cx)
    return cx


def field_dims(cx, d, mode="exact", prereduce=True):
    """``FieldDimTable`` for ``F_d = Q(zeta_d)``.

    ``mode`` is ``exact`` (certified ranks, falling back to ``Q(zeta_d)``),
    ``direct`` (every rank by elimination in ``Q(zeta_d)``) or ``modular``
    (two primes must agree; disagreement falls back to ``exact``).
    """
    work = prepare(cx, prereduce)
    prior = work.meta.get("pairs_by_degree", [0] * (work.top + 1))
    if mode == "direct":
        ranks, method, primes = _ranks_over(work, exact_field(d)), "direct", ()
    elif mode == "modular":
        try:
            ranks, method, primes = _modular_ranks(work, d)
        except PrimeDisagreement:
            ranks, method, primes = _certified_ranks(work, d)
            method = "modular-fallback"
    elif mode == "exact":
        ranks, method, primes = _certified_ranks(work, d)
    else:
        raise ValueError(f"unknown field mode {mode!r}")
    dims = _residual_dims(work.sizes(), ranks)[: work.valid_top + 1]
    total = tuple(a + b for a, b in zip(prior, ranks))
    complete = not cx.truncated
    return FieldDimTable(d, tuple(dims), total, tuple(cx.sizes()), method, primes, complete)


def multiplicities_from_dims(table, free=None):
    """``a_{d,k} = sum_{i<=k} (-1)^(k-i) (dim_i - free_i)``.

    >>> multiplicities_from_dims(FieldDimTable(1, (1, 10, 35, 50, 24), (), (), "exact"))
    [1, 9, 26, 24, 0]
    """
    free = free or [0] * len(table.dims)
    alphas, prev = [], 0
    for k, dim in enumerate(table.dims):
        a = dim - free[k] - prev
        if a < 0:
            raise NegativeMultiplicity(
                f"negative multiplicity {a} for phi_{table.d} in degree {k} (dims {table.dims})")
        alphas.append(a)
        prev = a
    if table.complete and alphas and alphas[-1]:
        raise InconsistencyError(
            f"phi_{table.d} multiplicity does not close at the top degree: {alphas}")
    return alphas


def generic_free_ranks(cx, seed=0):
    """Free ranks per degree, via ranks at random specializations.

    A random point modulo a large prime gives upper bounds on the free
    ranks; if they are all zero that settles it.  Otherwise two random
    rational points are compared (a third breaks a disagreement).
    """
    work = prepare(cx)
    rng = random.Random(seed)
    top = work.valid_top

    def dims_at(f):
        return _residual_dims(work.sizes(), _ranks_over(work, f))[: top + 1]

    while True:
        r = rng.randrange(2, GENERIC_PRIME - 1)
        if all(pow(r, d, GENERIC_PRIME) != 1 for d in range(1, 64)):
            break
    bound = dims_at(PrimeField(GENERIC_PRIME, r))
    if not any(bound):
        return bound, "modular-bound"

    def point():
        while True:
            x = Fraction(rng.choice([-1, 1]) * rng.randrange(2, 60), rng.randrange(1, 60))
            if abs(x) != 1:
                return RationalPoint(x)

    a, b = dims_at(point()), dims_at(point())
    if a != b:
        c = dims_at(point())
        a = [min(x, y, z) for x, y, z in zip(a, b, c)]
    return a, "rational-points"


def torsion_candidates(system, spec=None):
    """Cyclotomic indices the field engine examines.

    For the full complex these are the divisors of the number of
    reflections.  Sub- and quotient complexes are assembled from pieces of
    standard parabolic subgroups, so their candidates are the divisors of
    the reflection counts of every rank-``j`` system of the same family and
    of type A.
    """
    full = divisors(reflection_count(system))
    if spec is None or spec.variant == "full":
        return full
    out = set(full)
    n = system.rank
    for j in range(1, n + 1):
        out |= set(divisors(j * (j + 1) // 2))
        if system.family == "B":
            out |= set(divisors(j * j))
        if system.family == "D" and j >= 2:
            out |= set(divisors(j * (j - 1)))
    return sorted(out)


def homology_fieldrank(cx, mode="exact", prereduce=True, candidates=None, seed=0):
    """Homology assembled from field dimensions for every candidate ``d``."""
    start = time.perf_counter()
    work = prepare(cx, prereduce)
    system = cx.system
    if candidates is None:
        candidates = torsion_candidates(system, cx.spec) if system else [1]
    full = cx.spec is None or cx.spec.variant == "full"
    free, free_method = generic_free_ranks(work, seed)
    if full and any(free):
        raise FreeRankNonzero(f"{cx.label()} has free ranks {free}")
    top = cx.valid_top
    torsion = [[] for _ in range(top + 1)]
    tables = {}
    for d in candidates:
        table = field_dims(work, d, mode, prereduce=False)
        table.complete = not cx.truncated
        tables[d] = table
        for k, a in enumerate(multiplicities_from_dims(table, free)):
            if a:
                torsion[k].append(TorsionFactor(d, a))
    degrees = [DegreeHomology(k, free[k], torsion[k]) for k in range(top + 1)]
    family, rank, spec = _report_header(cx)
    meta = {
        "timing_ms": int(1000 * (time.perf_counter() - start)),
        "field_methods": {d: t.method for d, t in tables.items()},
        "free_rank_method": free_method,
    }
    primes = sorted({p for t in tables.values() for p in t.primes})
    if primes:
        meta["primes"] = primes
    method = "modular" if mode == "modular" else "field"
    return HomologyReport(family, rank, spec, method, degrees, meta=meta)


# --- cohomology -----------------------------------------------------------------------

def cohomology_shift(report):
    """``H^k = H_{k-1}``; requires a torsion-only report."""
    if report.kind != "homology":
        raise ShiftInvalid("the shift applies to homology reports")
    if any(deg.free_rank for deg in report.degrees):
        raise ShiftInvalid("cohomology shift needs vanishing free ranks")
    degrees = [DegreeHomology(0)]
    for deg in report.degrees:
        degrees.append(DegreeHomology(deg.k + 1, 0, list(deg.torsion), list(deg.higher)))
    return HomologyReport(report.family, report.rank, report.complex, report.method,
                          degrees, kind="cohomology", meta=dict(report.meta))


def cohomology_dims(cx, d):
    """``dim H^k(Hom(C, F_d))`` from ranks of the transposed boundaries."""
    target = exact_field(d)
    ranks = [0] * (cx.top + 2)
    for h in range(1, cx.top + 1):
        ranks[h] = matrix_rank(specialize_matrix(cx.matrix(h), target).transpose())
    return [cx.size(k) - ranks[k] - ranks[k + 1] for k in range(cx.top + 1)]


def cohomology_multiplicities(dims):
    """``b_k = sum_{i>=k} (-1)^(i-k) dims_i`` (cohomology universal coefficients)."""
    out, nxt = [0] * len(dims), 0
    for k in range(len(dims) - 1, -1, -1):
        out[k] = dims[k] - nxt
        if out[k] < 0:
            raise NegativeMultiplicity(f"negative cohomology multiplicity in degree {k}")
        nxt = out[k]
    return out


# --- dispatch -------------------------------------------------------------------------

METHODS = ("auto", "snf", "field", "modular")


def compute_homology(cx, method="auto"):
    """Run the engine selected by ``method``; ``auto`` picks SNF for complexes
    within the SNF cell bound and the field engine above it."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "snf" if cx.num_cells <= config.SNF_CELL_LIMIT else "field"
    if method == "snf":
        return homology_snf(cx)
    return homology_fieldrank(cx, mode="modular" if method == "modular" else "exact")
