"""The algebraic Salvetti complex of a finite Coxeter group with coefficients
in ``R = Q[t, t^-1]``, where every standard generator acts by ``t``.

A cell ``E(w, Gamma)`` has degree ``|Gamma|`` and boundary

    d E(w, G) = sum_{s in G} sum_{b in W_G^{G - s}}
                (-1)^(l(b) + mu(G, s)) t^((l(b) + l(w) - l(wb)) / 2) E(wb, G - s)

where ``b`` runs over the minimal coset representatives of ``W_{G - s}`` in
``W_G``.  Sub- and quotient complexes of the filtration by ``S_k`` are
obtained by restricting the cell basis; quotient boundaries drop every term
whose target cell is not retained.
"""

from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

from . import config
from .coxeter import (coset_decompose, left_orbits, length, lower_set, members,
                      minimal_coset_reps, mu, popcount, upper_set, word, _mul)
from .errors import InconsistencyError, ParityViolation, ResourceLimit
from .fields import RationalPoint
from .laurent import LaurentPoly


class Cell(NamedTuple):
    w: tuple
    gamma: int

    @property
    def degree(self):
        return popcount(self.gamma)


VARIANTS = ("full", "subg", "quotf", "quotmod")


@dataclass(frozen=True)
class ComplexSpec:
    """Which part of the filtration to build.

    * ``full``: all of ``C(W)``;
    * ``subg``: ``G^k``, cells with ``Gamma`` inside ``S_k``;
    * ``quotf``: ``F^k``, cells with ``Gamma`` containing ``S^{n-k}``
      (the last ``k`` generators);
    * ``quotmod``: ``C(W)/G^k``, cells with ``Gamma`` not inside ``S_k``.
    """
    variant: str = "full"
    k: int = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown complex variant {self.variant!r}")
        if self.variant != "full" and self.k is None:
            raise ValueError(f"variant {self.variant} needs k")
        if self.variant == "full" and self.k is not None:
            raise ValueError("the full complex takes no k")

    @classmethod
    def parse(cls, text):
        """``full``, ``subg:K``, ``quotf:K`` or ``quotmod:K``."""
        if text == "full":
            return cls()
        name, _, k = text.partition(":")
        try:
            return cls(name, int(k))
        except ValueError:
            raise ValueError(f"bad complex specification {text!r}") from None

    def __str__(self):
        return "full" if self.variant == "full" else f"{self.variant}:{self.k}"

    def accepts(self, n, mask):
        v, k = self.variant, self.k
        if v == "full":
            return True
        if v == "subg":
            return not mask & ~lower_set(k)
        if v == "quotf":
            top = upper_set(n, n - k)
            return mask & top == top
        return bool(mask & ~lower_set(k))

    def masks(self, n, h):
        """Generator subsets of size ``h`` in the basis, ascending."""
        return [m for m in range(1 << n) if popcount(m) == h and self.accepts(n, m)]


class LaurentRing:
    """The coefficient ring itself, with the same interface as the fields."""

    tag = "laurent"
    zero = LaurentPoly.zero()
    one = LaurentPoly.one()

    def __repr__(self):
        return "LaurentRing()"

    def __eq__(self, other):
        return isinstance(other, LaurentRing)

    def __hash__(self):
        return hash("laurent")

    def is_zero(self, a):
        return a.is_zero()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.unit_inverse()

    def from_poly(self, p):
        return p

    def to_text(self, a):
        return a.to_text()

    def from_text(self, text, line=None):
        return LaurentPoly.from_text(text, line)


LAURENT = LaurentRing()


@dataclass
class SparseMatrix:
    """Column-sparse matrix: ``columns[j]`` maps row index to a nonzero entry."""
    nrows: int
    ncols: int
    ring: object
    columns: list

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return ((self.nrows, self.ncols, self.ring.tag) ==
                (other.nrows, other.ncols, other.ring.tag)
                and self.columns == other.columns)

    def nnz(self):
        return sum(len(c) for c in self.columns)

    def to_dense(self):
        out = [[self.ring.zero] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self):
        cols = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, self.ring, cols)


@dataclass
class ChainComplex:
    """Graded cell bases with boundary matrices over ``ring``.

    ``boundaries[h]`` holds one column per degree-``h`` basis element (rows
    are degree ``h-1``); ``boundaries[0]`` is the empty list.  ``valid_top``
    is the highest degree whose homology the complex computes: it is one
    less than the top degree when the complex was truncated.
    """
    bases: list
    boundaries: list
    ring: object = LAURENT
    system: object = None
    spec: ComplexSpec = None
    valid_top: int = None
    offset: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.valid_top is None:
            self.valid_top = self.top

    @property
    def top(self):
        return len(self.bases) - 1

    def degrees(self):
        return range(len(self.bases))

    def size(self, h):
        return len(self.bases[h]) if 0 <= h < len(self.bases) else 0

    def sizes(self):
        return [len(b) for b in self.bases]

    @property
    def num_cells(self):
        return sum(self.sizes())

    @property
    def truncated(self):
        return self.valid_top < self.top

    def matrix(self, h):
        """``d_h`` as a ``SparseMatrix`` (``size(h-1) x size(h)``)."""
        cols = self.boundaries[h] if 0 < h <= self.top else [{}] * self.size(h)
        return SparseMatrix(self.size(h - 1), self.size(h), self.ring, cols)

    def euler_characteristic(self):
        return sum((-1) ** h * n for h, n in enumerate(self.sizes()))

    def label(self):
        if self.system is None:
            return "complex"
        return f"{self.system.name} {self.spec or 'full'}"


# --- boundary ---------------------------------------------------------------------

def _blocks(system, mask):
    """Per ``sigma in Gamma``: ``(Gamma - sigma, [(word(b), l(b), sign)])``."""
    out = []
    for sigma in members(mask):
        sub = mask & ~(1 << (sigma - 1))
        m = mu(mask, sigma)
        reps = []
        for b in minimal_coset_reps(system, mask, sub):
            lb = length(system, b)
            reps.append((tuple(word(system, b)), lb, -1 if (lb + m) % 2 else 1))
        out.append((sub, reps))
    return out


def boundary_cell(system, cell):
    """The boundary of one cell as a formal chain ``{Cell: LaurentPoly}``."""
    w, mask = cell
    lw = length(system, w)
    chain = {}
    for sub, reps in _blocks(system, mask):
        for letters, lb, sign in reps:
            x = w
            for i in letters:
                x = _mul(x, system.generators[i - 1])
            twice = lb + lw - length(system, x)
            if twice % 2:
                raise ParityViolation(f"odd exponent for {cell} and beta of length {lb}")
            target = Cell(x, sub)
            chain[target] = chain.get(target, LaurentPoly.zero()) + LaurentPoly.monomial(sign, twice // 2)
    return {c: v for c, v in chain.items() if v}


def act(system, sigma, chain):
    """Left action ``sigma . E(w, Gamma) = E(sigma w, Gamma)`` extended linearly."""
    return {Cell(_mul(sigma, c.w), c.gamma): v for c, v in chain.items()}


def equivariance_holds(system, cell):
    """``d E(w, G) == w^G . d E(w_G, G)`` for the coset factorization of ``w``."""
    upper, lower = coset_decompose(system, cell.w, cell.gamma)
    return boundary_cell(system, cell) == act(system, upper, boundary_cell(system, Cell(lower, cell.gamma)))


# --- assembly -----------------------------------------------------------------------

def build_complex(system, spec=None, max_degree=None, limit=None):
    """Assemble the (sub/quotient) Salvetti complex of ``system``.

    Bases are ordered ``w``-major (group order by length, then one-line) and
    ``Gamma``-mask ascending within each ``w``.  With ``max_degree`` the
    complex stops at that degree; homology is then valid below it.
    """
    spec = spec or ComplexSpec()
    n = system.rank
    if spec.variant != "full" and not 0 <= spec.k <= n:
        raise ValueError(f"k={spec.k} outside 0..{n}")
    top = n if max_degree is None else min(n, max_degree)
    masks = [spec.masks(n, h) for h in range(top + 1)]
    table = system.table
    nw = len(table)
    total = nw * sum(len(m) for m in masks)
    bound = config.cell_limit() if limit is None else limit
    if total > bound:
        raise ResourceLimit(f"{system.name} {spec} needs {total} cells, limit {bound}")

    elements, lengths, rmul = table.elements, table.lengths, table.rmul
    position = [{m: j for j, m in enumerate(ms)} for ms in masks]
    bases = [[Cell(w, m) for w in elements for m in ms] for ms in masks]
    boundaries = [[]]
    monomials = {}

    for h in range(1, top + 1):
        width = len(masks[h - 1])
        rowpos = position[h - 1]
        columns = [None] * len(bases[h])
        for j, mask in enumerate(masks[h]):
            blocks = []
            for sub, reps in _blocks(system, mask):
                p = rowpos.get(sub)
                if p is not None:  # quotient variants drop faces outside the basis
                    blocks.append((p, reps))
            stride = len(masks[h])
            for wi in range(nw):
                lw = lengths[wi]
                col = {}
                for p, reps in blocks:
                    for letters, lb, sign in reps:
                        x = wi
                        for a in letters:
                            x = rmul[x][a - 1]
                        twice = lb + lw - lengths[x]
                        if twice & 1:
                            raise ParityViolation(
                                f"odd exponent at w={elements[wi]}, Gamma={mask:b}")
                        key = (sign, twice >> 1)
                        mono = monomials.get(key)
                        if mono is None:
                            mono = monomials[key] = LaurentPoly.monomial(sign, twice >> 1)
                        col[x * width + p] = mono
                columns[wi * stride + j] = col
        boundaries.append(columns)

    valid = top if top == n else top - 1
    return ChainComplex(bases, boundaries, LAURENT, system, spec, valid)


def specialize_complex(complex_, target, check=True):
    """Map every entry into the field ``target`` (see ``salvhom.fields``)."""
    if complex_.ring is not LAURENT and complex_.ring != LAURENT:
        raise ValueError("only Laurent complexes can be specialized")
    conv = target.from_poly
    cache = {}
    boundaries = [[]]
    for cols in complex_.boundaries[1:]:
        out = []
        for col in cols:
            new = {}
            for i, v in col.items():
                x = cache.get(v)
                if x is None:
                    x = cache[v] = conv(v)
                if not target.is_zero(x):
                    new[i] = x
            out.append(new)
        boundaries.append(out)
    result = ChainComplex(complex_.bases, boundaries, target, complex_.system,
                          complex_.spec, complex_.valid_top, complex_.offset,
                          dict(complex_.meta))
    if check:
        check_dd(result)
    return result


def isotypic_components_at_one(complex_, gens):
    """Split the ``t = 1`` specialization of a Laurent complex into the
    character pieces of ``H = <gens>``, commuting involutions acting by left
    multiplication on ``w``.

    At ``t = 1`` the boundary commutes with that action and ``H`` permutes
    the cells freely, so the rational complex is the direct sum over the
    ``2^len(gens)`` characters ``chi`` of complexes on one cell per
    ``H``-orbit: a face ``E(h r, G)`` with orbit representative ``r`` enters
    as ``chi(h) E(r, G)``.  Yields the pieces, character by character.
    """
    system = complex_.system
    rep, bits = left_orbits(system, gens)
    index = system.table.index
    point = RationalPoint(1)
    values = {}
    wid = [[index[c.w] for c in basis] for basis in complex_.bases]
    keep = [[i for i, w in enumerate(ws) if rep[w] == w] for ws in wid]
    position = [{(wid[h][i], complex_.bases[h][i].gamma): j for j, i in enumerate(kept)}
                for h, kept in enumerate(keep)]
    bases = [[complex_.bases[h][i] for i in kept] for h, kept in enumerate(keep)]
    for chi in range(1 << len(gens)):
        boundaries = [[]]
        for h in range(1, len(bases)):
            below, cells_below, ids_below = position[h - 1], complex_.bases[h - 1], wid[h - 1]
            columns = []
            for i in keep[h]:
                col = {}
                for r, v in complex_.boundaries[h][i].items():
                    x = values.get(v)
                    if x is None:
                        x = values[v] = point.from_poly(v)
                    w = ids_below[r]
                    if (bits[w] & chi).bit_count() & 1:
                        x = -x
                    j = below[(rep[w], cells_below[r].gamma)]
                    s = col.get(j, 0) + x
                    if s:
                        col[j] = s
                    else:
                        del col[j]
                columns.append(col)
            boundaries.append(columns)
        yield ChainComplex(bases, boundaries, point, system, complex_.spec,
                           complex_.valid_top, complex_.offset, {"character": chi})


def check_dd(complex_):
    """Raise ``InconsistencyError`` unless every composite ``d_{h-1} d_h`` is 0."""
    ring = complex_.ring
    for h in range(2, complex_.top + 1):
        lower = complex_.boundaries[h - 1]
        for j, col in enumerate(complex_.boundaries[h]):
            acc = {}
            for f, a in col.items():
                for g, b in lower[f].items():
                    prod = ring.mul(a, b)
                    acc[g] = ring.add(acc[g], prod) if g in acc else prod
            if any(not ring.is_zero(v) for v in acc.values()):
                raise InconsistencyError(
                    f"d_{h - 1} d_{h} != 0 at column {j} of {complex_.label()}")
    return True


def augment(complex_, k):
    """The ``k``-fold degree shift ``M[k]`` as a reindexing view (no copying
    of columns; the lowest shifted degree gets empty columns)."""
    if k < 0:
        raise ValueError("augmentation must be nonnegative")
    if k == 0:
        return complex_
    bases = [[] for _ in range(k)] + complex_.bases
    first = [{} for _ in complex_.bases[0]]
    boundaries = [[] for _ in range(k)] + [first] + complex_.boundaries[1:]
    return ChainComplex(bases, boundaries, complex_.ring, complex_.system,
                        complex_.spec, complex_.valid_top + k, complex_.offset + k,
                        dict(complex_.meta))


def expected_size(system, spec, h):
    """Closed-form basis size in degree ``h``."""
    n, order = system.rank, system.order
    v, k = spec.variant, spec.k
    if v == "full":
        return order * comb(n, h)
    if v == "subg":
        return order * comb(k, h)
    if v == "quotf":
        return order * comb(n - k, h - k) if h >= k else 0
    return order * (comb(n, h) - comb(k, h))
