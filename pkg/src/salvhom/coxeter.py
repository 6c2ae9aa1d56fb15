"""Finite Coxeter systems of types A, B and D as signed permutation groups.

Elements are tuples in one-line notation.  ``A_n`` acts on ``1..n+1`` with
all entries positive; ``B_n`` and ``D_n`` act on ``±1..±n``.  Multiplication
is composition of functions, so right multiplication by a generator acts on
positions:

>>> A2 = make_system("A", 2)
>>> s1, s2 = A2.generators
>>> multiply(A2, s1, s2)
(2, 3, 1)
>>> length(A2, multiply(A2, multiply(A2, s1, s2), s1))
3

Generator numbering follows the parabolic chains ``S_k = {s_1..s_k}``:

* A: ``s_i`` swaps positions ``i, i+1``;
* B: ``s_1`` negates position 1, ``s_i`` (i >= 2) swaps ``i-1, i``, so that
  ``W_{S_k}`` is ``B_k``;
* D: ``s_i`` (i < n) swaps ``i, i+1`` and ``s_n`` swaps and negates the last
  two positions, so that ``W_{S_k}`` is ``A_k`` for ``k < n``.

Generator subsets are integer bit masks: bit ``i-1`` stands for ``s_i``.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import factorial

from . import config
from .errors import MalformedElement, RankOutOfRange, ResourceLimit, UnsupportedFamily

FAMILIES = ("A", "B", "D")

Element = tuple


# --- generator subsets -------------------------------------------------------

def subset(*indices):
    """Mask of the generators ``s_i`` for the given 1-based indices."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def lower_set(k):
    """Mask of ``S_k = {s_1, ..., s_k}``."""
    return (1 << k) - 1


def upper_set(n, k):
    """Mask of ``S^k = S minus S_k`` in a rank-``n`` system."""
    return lower_set(n) & ~lower_set(k)


def members(mask):
    """1-based generator indices in ``mask``, increasing."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mu(mask, sigma):
    """``#{i in mask : i <= sigma}`` for a 1-based generator index."""
    return bin(mask & lower_set(sigma)).count("1")


def popcount(mask):
    return bin(mask).count("1")


# --- systems -----------------------------------------------------------------

@dataclass(frozen=True)
class CoxeterSystem:
    family: str
    rank: int

    @property
    def degree(self):
        """Length of the one-line notation."""
        return self.rank + 1 if self.family == "A" else self.rank

    @property
    def name(self):
        return f"{self.family}{self.rank}"

    @property
    def full_mask(self):
        return lower_set(self.rank)

    @cached_property
    def identity(self):
        return tuple(range(1, self.degree + 1))

    @cached_property
    def generators(self):
        return tuple(apply_generator(self, self.identity, i)
                     for i in range(1, self.rank + 1))

    @cached_property
    def order(self):
        return parabolic_order(self, self.full_mask)

    @cached_property
    def table(self):
        """Indexed enumeration of the whole group (see ``ElementTable``)."""
        return ElementTable(self)

    @cached_property
    def _coset_cache(self):
        return {}

    def __repr__(self):
        return f"CoxeterSystem({self.family!r}, {self.rank})"


def make_system(family, rank, limit=None):
    """Build the rank-``rank`` system of the given family.

    ``limit`` bounds the group order (default: the configured cell limit),
    so that later enumerations cannot run away.
    """
    family = str(family).upper()
    if family not in FAMILIES:
        raise UnsupportedFamily(f"unsupported Coxeter family {family!r}")
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise RankOutOfRange(f"rank must be an integer, got {rank!r}")
    minimum = 2 if family == "D" else 1
    if rank < minimum:
        raise RankOutOfRange(f"{family}_n requires n >= {minimum}, got {rank}")
    system = CoxeterSystem(family, rank)
    bound = config.cell_limit() if limit is None else limit
    if system.order > bound:
        raise RankOutOfRange(
            f"{system.name} has order {system.order}, above the limit {bound}")
    return system


def parabolic_system(system, k):
    """The system isomorphic to ``W_{S_k}`` (A_k, B_k, or A_k for type D)."""
    if not 1 <= k <= system.rank:
        raise RankOutOfRange(f"k={k} outside 1..{system.rank}")
    if k == system.rank:
        return system
    family = "B" if system.family == "B" else "A"
    return CoxeterSystem(family, k)


# --- element arithmetic -------------------------------------------------------

def validate(system, w):
    if not isinstance(w, tuple) or len(w) != system.degree:
        raise MalformedElement(f"{w!r} is not a one-line element of {system.name}")
    if sorted(abs(x) for x in w) != list(range(1, system.degree + 1)):
        raise MalformedElement(f"{w!r} is not a signed permutation")
    negatives = sum(1 for x in w if x < 0)
    if system.family == "A" and negatives:
        raise MalformedElement(f"{w!r} has negative entries in type A")
    if system.family == "D" and negatives % 2:
        raise MalformedElement(f"{w!r} has an odd number of sign changes in type D")
    return w


def apply_generator(system, w, i):
    """Right multiplication ``w * s_i`` (1-based ``i``)."""
    v = list(w)
    fam = system.family
    if fam == "A":
        v[i - 1], v[i] = v[i], v[i - 1]
    elif fam == "B":
        if i == 1:
            v[0] = -v[0]
        else:
            v[i - 2], v[i - 1] = v[i - 1], v[i - 2]
    else:
        n = system.rank
        if i < n:
            v[i - 1], v[i] = v[i], v[i - 1]
        else:
            v[n - 2], v[n - 1] = -v[n - 1], -v[n - 2]
    return tuple(v)


def multiply(system, u, v):
    validate(system, u)
    validate(system, v)
    return _mul(u, v)


def _mul(u, v):
    return tuple(u[x - 1] if x > 0 else -u[-x - 1] for x in v)


def inverse(system, w):
    validate(system, w)
    out = [0] * len(w)
    for j, x in enumerate(w, start=1):
        if x > 0:
            out[x - 1] = j
        else:
            out[-x - 1] = -j
    return tuple(out)


def _inversions(w):
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def _length(family, w):
    if family == "A":
        return _inversions(w)
    if family == "B":
        return _inversions(w) + sum(-x for x in w if x < 0)
    # type D with the fork at the end: conjugate by the reversal j -> n+1-j,
    # which carries our numbering onto the fork-at-the-start convention
    n = len(w)
    v = [(n + 1 - x) if x > 0 else -(n + 1 + x) for x in reversed(w)]
    return _inversions(v) + sum(-x - 1 for x in v if x < 0)


def length(system, w):
    validate(system, w)
    return _length(system.family, w)


def _descents(family, w):
    mask = 0
    n = len(w)
    if family == "A":
        for i in range(n - 1):
            if w[i] > w[i + 1]:
                mask |= 1 << i
    elif family == "B":
        if w[0] < 0:
            mask |= 1
        for i in range(1, n):
            if w[i - 1] > w[i]:
                mask |= 1 << i
    else:
        # v[0..n-1] is the reversal conjugate; its descent at position p
        # corresponds to our generator s_{n-1-p}, and v[0]+v[1] < 0 to s_n
        v = [(n + 1 - x) if x > 0 else -(n + 1 + x) for x in reversed(w)]
        if v[0] + v[1] < 0:
            mask |= 1 << (n - 1)
        for p in range(n - 1):
            if v[p] > v[p + 1]:
                mask |= 1 << (n - 2 - p)
    return mask


def right_descents(system, w):
    """Mask of the generators ``s`` with ``l(ws) < l(w)``."""
    validate(system, w)
    return _descents(system.family, w)


# --- parabolic subgroups ------------------------------------------------------

def _edges(system):
    n = system.rank
    if system.family in ("A", "B"):
        return [(i, i + 1) for i in range(1, n)]
    edges = [(i, i + 1) for i in range(1, n - 1)]
    if n >= 3:
        edges.append((n - 2, n))
    return edges


def components(system, mask):
    """Connected components of ``mask`` in the Dynkin diagram, as masks."""
    parent = {i: i for i in members(mask)}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in _edges(system):
        if a in parent and b in parent:
            parent[find(a)] = find(b)
    groups = {}
    for i in parent:
        groups.setdefault(find(i), []).append(i)
    return sorted(subset(*g) for g in groups.values())


def _component_order(system, comp):
    m = popcount(comp)
    n = system.rank
    if system.family == "B" and comp & 1:
        return 2 ** m * factorial(m)
    if system.family == "D" and n >= 3 and all(comp >> (i - 1) & 1 for i in (n - 2, n - 1, n)):
        return 2 ** (m - 1) * factorial(m)
    return factorial(m + 1)


def parabolic_order(system, mask):
    """``|W_Gamma|`` from the orders of the irreducible components."""
    order = 1
    for comp in components(system, mask):
        order *= _component_order(system, comp)
    return order


def parabolic_index(system, mask):
    """``|W| / |W_Gamma|``, the number of minimal coset representatives."""
    return system.order // parabolic_order(system, mask)


def _bfs(system, start, mask):
    gens = members(mask)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in gens:
            v = apply_generator(system, w, i)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _sort(system, elements):
    fam = system.family
    return sorted(elements, key=lambda w: (_length(fam, w), w))


def enumerate_parabolic(system, mask, limit=None):
    """All elements of ``W_Gamma``, ordered by (length, one-line)."""
    bound = config.PARABOLIC_LIMIT if limit is None else limit
    if parabolic_order(system, mask) > bound:
        raise ResourceLimit(f"|W_Gamma| = {parabolic_order(system, mask)} exceeds {bound}")
    return _sort(system, _bfs(system, system.identity, mask))


def minimal_coset_reps(system, mask, sub):
    """``W_Gamma`` intersected with ``W^{Gamma'}``: elements of ``W_Gamma``
    with no right descent in ``Gamma'``.  Memoized per ``(Gamma, Gamma')``."""
    if sub & ~mask:
        raise ValueError("Gamma' must be a subset of Gamma")
    key = (mask, sub)
    cache = system._coset_cache
    if key not in cache:
        fam = system.family
        cache[key] = [b for b in enumerate_parabolic(system, mask)
                      if not _descents(fam, b) & sub]
    return list(cache[key])


def coset_decompose(system, w, mask):
    """Split ``w = w^Gamma * w_Gamma`` with ``w^Gamma`` minimal in ``w W_Gamma``."""
    validate(system, w)
    fam = system.family
    upper, lower = w, system.identity
    while True:
        d = _descents(fam, upper) & mask
        if not d:
            return upper, lower
        i = (d & -d).bit_length()
        upper = apply_generator(system, upper, i)
        # lower <- s_i * lower
        lower = _mul(apply_generator(system, system.identity, i), lower)


def reflection_count(system):
    """Number of reflections, i.e. of hyperplanes in the reflection arrangement."""
    n = system.rank
    return {"A": n * (n + 1) // 2, "B": n * n, "D": n * (n - 1)}[system.family]


def commuting_involutions(system):
    """Independent generators of an elementary abelian 2-subgroup of ``W``.

    A: disjoint transpositions ``(1 2), (3 4), ...``; B: single sign changes;
    D: sign changes of positions ``1, i`` for ``i >= 2``.

    >>> commuting_involutions(make_system("A", 3))
    [(2, 1, 3, 4), (1, 2, 4, 3)]
    """
    ident = system.identity
    out = []
    if system.family == "A":
        for i in range(0, system.degree - 1, 2):
            v = list(ident)
            v[i], v[i + 1] = v[i + 1], v[i]
            out.append(tuple(v))
    elif system.family == "B":
        for i in range(system.degree):
            out.append(tuple(-x if j == i else x for j, x in enumerate(ident)))
    else:
        for i in range(1, system.degree):
            out.append(tuple(-x if j in (0, i) else x for j, x in enumerate(ident)))
    return out


def left_orbits(system, gens):
    """Orbits of the subgroup ``H = <gens>`` (commuting involutions) acting on
    ``system.table`` from the left.

    Returns ``(rep, bits)`` indexed like the table: element ``i`` equals
    ``h * elements[rep[i]]`` where ``h`` is the product of the generators
    whose bits are set in ``bits[i]``.
    """
    table = system.table
    index, elements = table.index, table.elements
    lmul = [[index[_mul(g, w)] for w in elements] for g in gens]
    rep = [None] * len(elements)
    bits = [0] * len(elements)
    for i in range(len(elements)):
        if rep[i] is not None:
            continue
        rep[i] = i
        orbit = [i]
        for j, left in enumerate(lmul):
            for x in list(orbit):
                y = left[x]
                rep[y], bits[y] = i, bits[x] | (1 << j)
                orbit.append(y)
    return rep, bits


def longest_element(system):
    fam = system.family
    if fam == "A":
        return tuple(range(system.degree, 0, -1))
    if fam == "B" or system.rank % 2 == 0:
        return tuple(-x for x in system.identity)
    # D_n with n odd: -1 is not in the group
    return tuple(-x for x in system.identity[:-1]) + (system.rank,)


def word(system, w):
    """A reduced word (1-based generator indices) for ``w``."""
    validate(system, w)
    fam = system.family
    out = []
    while True:
        d = _descents(fam, w)
        if not d:
            return out[::-1]
        i = (d & -d).bit_length()
        out.append(i)
        w = apply_generator(system, w, i)


# --- indexed enumeration ------------------------------------------------------

class ElementTable:
    """All of ``W`` in deterministic order with precomputed arithmetic.

    ``elements[i]`` is the i-th element in (length, one-line) order,
    ``lengths[i]`` its length and ``rmul[i][g]`` the index of
    ``elements[i] * s_{g+1}``.
    """

    def __init__(self, system):
        bound = config.cell_limit()
        if system.order > bound:
            raise ResourceLimit(f"|W| = {system.order} exceeds {bound}")
        self.system = system
        elements = _sort(system, _bfs(system, system.identity, system.full_mask))
        self.elements = elements
        self.index = {w: i for i, w in enumerate(elements)}
        self.lengths = [_length(system.family, w) for w in elements]
        index = self.index
        gens = range(1, system.rank + 1)
        self.rmul = [[index[apply_generator(system, w, i)] for i in gens]
                     for w in elements]

    def __len__(self):
        return len(self.elements)

    def times_word(self, i, letters):
        """Index of ``elements[i] * s_{a} * s_{b} * ...`` for 1-based letters."""
        rmul = self.rmul
        for a in letters:
            i = rmul[i][a - 1]
        return i
