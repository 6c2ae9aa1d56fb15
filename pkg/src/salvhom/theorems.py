"""Computational checks of the stability statements and their ingredients.

Every check computes both sides of the claimed relation independently and
returns a ``CheckResult``; a failing result carries the computed modules as
witness data.
"""

import random
from dataclasses import dataclass, field
from math import gcd

from .coxeter import (CoxeterSystem, commuting_involutions, coset_decompose, lower_set,
                      make_system, multiply, parabolic_index, parabolic_system,
                      reflection_count, word)
from .errors import InconsistencyError, RangeViolation
from .fields import CyclotomicField, RationalPoint
from .homology import (cohomology_dims, cohomology_multiplicities, cohomology_shift,
                       compute_homology, field_dims, homology_fieldrank, homology_snf,
                       multiplicities_from_dims)
from .laurent import divisors
from .linalg import matrix_rank, specialize_matrix
from .reduction import reduce_complex
from .salvetti import (Cell, ComplexSpec, build_complex, check_dd, equivariance_holds,
                       isotypic_components_at_one)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    params: dict
    verdict: str
    reason: str = ""
    witness: dict = field(default_factory=dict)
    informational: bool = False

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def counts(self):
        """Whether the verdict decides a suite (informational results do not)."""
        return not self.informational and self.verdict != SKIPPED

    def sort_key(self):
        return (self.name, sorted(self.params.items()))

    def to_dict(self):
        return {"name": self.name, "params": self.params, "verdict": self.verdict,
                "reason": self.reason, "witness": self.witness,
                "informational": self.informational}

    def line(self):
        params = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        tag = " (informational)" if self.informational else ""
        extra = f": {self.reason}" if self.reason else ""
        return f"{self.verdict.upper():7} {self.name}({params}){tag}{extra}"


def _verdict(ok):
    return PASS if ok else FAIL


# --- Betti numbers ------------------------------------------------------------------

def product_formula(family, n):
    """Coefficients of the Poincare polynomial of the complement."""
    if family == "A":
        roots = list(range(1, n + 1))
    elif family == "B":
        roots = [2 * i - 1 for i in range(1, n + 1)]
    elif family == "D":
        roots = [2 * i - 1 for i in range(1, n)] + [n - 1]
    else:
        raise ValueError(f"no product formula for family {family!r}")
    coeffs = [1]
    for a in roots:
        coeffs = [x + a * y for x, y in zip(coeffs + [0], [0] + coeffs)]
    return tuple(coeffs)


@dataclass(frozen=True)
class BettiVector:
    family: str
    rank: int
    values: tuple

    def alternating_sum(self, k):
        """``sum_{i<=k} (-1)^(k-i) b_i``."""
        return sum((-1) ** (k - i) * self.values[i] for i in range(k + 1))

    def matches_product_formula(self):
        return self.values == product_formula(self.family, self.rank)

    def to_list(self):
        return list(self.values)


def betti(system, max_degree=None):
    """Untwisted rational Betti numbers: homology of the complex at ``t = 1``.

    With ``max_degree`` only ``b_0 .. b_{max_degree - 1}`` are computed.
    """
    cx = build_complex(system, max_degree=max_degree)
    totals = [0] * (cx.top + 1)
    for piece in isotypic_components_at_one(cx, commuting_involutions(system)):
        for h, n in enumerate(reduce_complex(piece).sizes()):
            totals[h] += n
    values = tuple(totals[: cx.valid_top + 1])
    return BettiVector(system.family, system.rank, values)


# --- stability and the rank formula ------------------------------------------------------

def stable_range(family, k, n):
    """Whether degree-``k`` homology of the rank-``n`` system is claimed trivial."""
    if family == "A":
        return n >= 3 * k + 1
    if family == "B":
        return n >= 2 * k + 1
    if family == "D":
        return n >= 3 * k + 2
    raise ValueError(f"unknown family {family!r}")


def degree_report(system, k, method="auto"):
    """Homology up to degree ``k`` from the complex truncated just above it."""
    cx = build_complex(system, max_degree=k + 1 if k + 1 < system.rank else None)
    return compute_homology(cx, method)


def check_stability(family, k, n, method="auto", report=None):
    system = make_system(family, n)
    report = report or degree_report(system, k, method)
    deg = report[k]
    ok = deg.is_trivial
    witness = {"H": deg.to_dict(), "method": report.method}
    return CheckResult("stability", {"family": family, "k": k, "n": n}, _verdict(ok),
                       "" if ok else f"H_{k} = {deg.describe()}", witness,
                       informational=not stable_range(family, k, n))


def check_rank_formula(system, k, method="auto", report=None, betti_vector=None):
    if not stable_range(system.family, k, system.rank):
        raise RangeViolation(f"{system.name}, k={k} is outside the stable range")
    report = report or degree_report(system, k, method)
    b = betti_vector or betti(system)
    alpha = report[k].multiplicity(1)
    expected = b.alternating_sum(k)
    ok = alpha == expected and report[k].is_trivial
    witness = {"alpha_1": alpha, "alternating_sum": expected, "betti": b.to_list(),
               "H": report[k].to_dict()}
    return CheckResult("rank-formula", {"family": system.family, "rank": system.rank, "k": k},
                       _verdict(ok), "" if ok else f"alpha_1 = {alpha}, sum = {expected}",
                       witness)


# --- decomposition and filtration ---------------------------------------------------------

def check_direct_sum(system, k):
    """``G^k`` is ``m_k`` copies of the complex of ``W_{S_k}``."""
    params = {"family": system.family, "rank": system.rank, "k": k}
    sub = homology_snf(build_complex(system, ComplexSpec("subg", k)))
    m = parabolic_index(system, lower_set(k))
    if k == 0:
        parts = None  # W_{S_0} is trivial: one cell, H_0 = R
        ok = all(deg.is_zero for deg in sub.degrees[1:]) and sub[0].free_rank == m \
            and not sub[0].torsion
    else:
        piece = homology_snf(build_complex(parabolic_system(system, k)))
        parts = {deg.k: deg for deg in piece.degrees}
        ok = True
        for deg in sub.degrees:
            if deg.k in parts:
                ok &= deg.same_module(parts[deg.k].scaled(m))
            else:
                ok &= deg.is_zero
    witness = {"copies": m, "subcomplex": [d.to_dict() for d in sub.degrees]}
    if parts is not None:
        witness["piece"] = [d.to_dict() for d in parts.values()]
    return CheckResult("direct-sum", params, _verdict(ok), "" if ok else "module mismatch", witness)


def _trivial_or_zero(system_or_none, degree):
    """``(trivial, description)`` of ``H_degree`` of a full complex."""
    if system_or_none is None:
        return True, "0"
    if degree < 0 or degree > system_or_none.rank:
        return True, "0"
    report = homology_snf(build_complex(system_or_none))
    deg = report[degree]
    return deg.is_trivial, deg.describe()


def check_filtration_triviality(family, n, k, q):
    """If ``H_{q-h}(C(W_{n-h-1}))`` is trivial for ``k <= h <= q`` then so is
    ``H_q(F^k_n)``; checked whenever the hypotheses hold computationally."""
    params = {"family": family, "n": n, "k": k, "q": q}
    if k > q:
        return CheckResult("filtration", params, PASS, "no hypotheses, vacuous")
    system = make_system(family, n)
    hypotheses = {}
    holds = True
    for h in range(k, q + 1):
        j = n - h - 1
        if j < 0:
            hypotheses[h] = "0"
            continue
        if j == 0:
            # trivial group: C = R in degree 0
            ok, text = (q - h != 0), ("R" if q - h == 0 else "0")
        else:
            ok, text = _trivial_or_zero(parabolic_system(system, j), q - h)
        hypotheses[h] = text
        holds &= ok
    cx = build_complex(system, ComplexSpec("quotf", k)) if k > 0 else build_complex(system)
    conclusion = compute_homology(cx)[q]
    witness = {"hypotheses": hypotheses, "H": conclusion.to_dict()}
    if not holds:
        return CheckResult("filtration", params, PASS, "hypotheses fail, vacuous", witness)
    ok = conclusion.is_trivial
    return CheckResult("filtration", params, _verdict(ok),
                       "" if ok else f"H_{q}(F^{k}) = {conclusion.describe()}", witness)


# --- block rank ----------------------------------------------------------------------------

def _ranks(cx, target, top):
    out = []
    for h in range(top + 1):
        if h == 0 or h > cx.top:
            out.append(0)
        else:
            out.append(matrix_rank(specialize_matrix(cx.matrix(h), target)))
    return out


def check_block_rank(q=1, seed=0):
    """Rank additivity of the boundary of ``C(A_{3q+1}) / G^{3q-1}``."""
    n = 3 * q + 1
    system = make_system("A", n)
    quotient = build_complex(system, ComplexSpec("quotmod", 3 * q - 1))
    left = build_complex(make_system("A", 3 * q), ComplexSpec("quotf", 1))
    middle = build_complex(make_system("A", 3 * q - 1))
    right = build_complex(system, ComplexSpec("quotf", 2))
    c_left = parabolic_index(system, lower_set(3 * q))
    c_middle = parabolic_index(system, lower_set(3 * q - 1))
    rng = random.Random(seed)
    targets = {f"d={d}": (RationalPoint(1) if d == 1 else CyclotomicField(d))
               for d in divisors(reflection_count(system))}
    targets["generic"] = RationalPoint(rng.randrange(2, 10 ** 6))
    witness = {"copies": [c_left, c_middle, 1]}
    failing = []
    for name, target in targets.items():
        lhs = _ranks(quotient, target, n)
        a, b, c = _ranks(left, target, n), _ranks(middle, target, n), _ranks(right, target, n)
        rhs = [c_left * a[h] + c_middle * (b[h - 1] if h >= 1 else 0) + c[h] for h in range(n + 1)]
        witness[name] = {"quotient": lhs, "sum": rhs}
        if lhs != rhs:
            failing.append(name)
    return CheckResult("block-rank", {"q": q}, _verdict(not failing),
                       f"ranks differ over {', '.join(failing)}" if failing else "", witness)


# --- arithmetic facts -------------------------------------------------------------------------

def check_coprimality(family, value):
    """``gcd(#A(A_{3q+1}), #A(A_{3q-1})) = 1`` (``value = q``) or
    ``gcd(#A(B_n), #A(B_{n-1})) = 1`` (``value = n``)."""
    if family == "A":
        params = {"family": "A", "q": value}
        lo = 3 * value - 1
        if lo < 1:
            return CheckResult("coprimality", params, SKIPPED, f"A_{lo} is not defined")
        counts = (reflection_count(CoxeterSystem("A", 3 * value + 1)),
                  reflection_count(CoxeterSystem("A", lo)))
    elif family == "B":
        params = {"family": "B", "n": value}
        if value < 2:
            return CheckResult("coprimality", params, SKIPPED, f"B_{value - 1} is not defined")
        counts = (reflection_count(CoxeterSystem("B", value)),
                  reflection_count(CoxeterSystem("B", value - 1)))
    else:
        raise ValueError(f"no coprimality statement for family {family!r}")
    g = gcd(*counts)
    return CheckResult("coprimality", params, _verdict(g == 1), "" if g == 1 else f"gcd = {g}",
                       {"counts": list(counts), "gcd": g})


def check_annihilator(family, n, degree, s, report=None):
    """Every torsion index of ``H_degree`` divides ``s`` and the torsion is squarefree."""
    params = {"family": family, "n": n, "degree": degree, "s": s}
    report = report or compute_homology(build_complex(make_system(family, n)))
    deg = report[degree]
    bad = [t.d for t in deg.torsion if s % t.d]
    ok = not bad and not deg.higher and not deg.free_rank
    return CheckResult("annihilator", params, _verdict(ok),
                       "" if ok else f"H_{degree} = {deg.describe()}", {"H": deg.to_dict()})


def check_dn_reduction(n):
    """Blocks of ``G^k(D_n)`` are labeled copies of ``C(A_k)`` for ``k < n``."""
    system = make_system("D", n)
    mismatches = {}
    for k in range(n):
        sub = build_complex(system, ComplexSpec("subg", k))
        if k == 0:
            same = sub.sizes()[0] == system.order and all(s == 0 for s in sub.sizes()[1:])
        else:
            same = _blocks_match(system, sub, k)
        if not same:
            mismatches[k] = "block mismatch"
    ok = not mismatches
    return CheckResult("dn-reduction", {"n": n}, _verdict(ok), "" if ok else str(mismatches),
                       {"k_checked": list(range(n))})


def _blocks_match(system, sub, k):
    small = make_system("A", k)
    piece = build_complex(small)
    mask = lower_set(k)
    # v in W_{S_k} of D_n -> element of A_k with the same reduced word
    image = {}
    split = {}
    for w in system.table.elements:
        upper, lower = coset_decompose(system, w, mask)
        if lower not in image:
            x = small.identity
            for i in word(system, lower):
                x = multiply(small, x, small.generators[i - 1])
            image[lower] = x
        split[w] = (upper, image[lower])
    index = [{(c.w, c.gamma): i for i, c in enumerate(basis)} for basis in piece.bases]
    for h in range(1, k + 1):
        rows, cols = sub.bases[h - 1], sub.bases[h]
        ref = piece.boundaries[h]
        for j, col in enumerate(sub.boundaries[h]):
            upper, v = split[cols[j].w]
            target = ref[index[h][(v, cols[j].gamma)]]
            mapped = {}
            for i, val in col.items():
                u2, v2 = split[rows[i].w]
                if u2 != upper:
                    return False
                mapped[index[h - 1][(v2, rows[i].gamma)]] = val
            if mapped != target:
                return False
    return True


# --- structural ----------------------------------------------------------------------------------

def check_equivariance(system, samples=1000, seed=0):
    rng = random.Random(seed)
    elements = system.table.elements
    n = system.rank
    bad = []
    for _ in range(samples):
        w = elements[rng.randrange(len(elements))]
        mask = rng.randrange(1 << n)
        if not equivariance_holds(system, Cell(w, mask)):
            bad.append([list(w), mask])
    ok = not bad
    return CheckResult("equivariance", {"family": system.family, "rank": system.rank,
                                        "samples": samples}, _verdict(ok),
                       "" if ok else f"{len(bad)} cells violate it", {"violations": bad[:5]})


def check_boundary_squared(system, spec=None):
    spec = spec or ComplexSpec()
    params = {"family": system.family, "rank": system.rank, "complex": str(spec)}
    try:
        check_dd(build_complex(system, spec))
    except InconsistencyError as exc:
        return CheckResult("dd-zero", params, FAIL, str(exc))
    return CheckResult("dd-zero", params, PASS)


def check_betti(system, betti_vector=None):
    """The ``t = 1`` Betti numbers against the product formula, and ``b_1 = #A``."""
    b = betti_vector or betti(system)
    formula = product_formula(system.family, system.rank)
    ok = b.values == formula and b.values[1] == reflection_count(system)
    return CheckResult("betti", {"family": system.family, "rank": system.rank}, _verdict(ok),
                       "" if ok else f"{b.values} != {formula}",
                       {"betti": b.to_list(), "formula": list(formula)})


def check_engine_agreement(system):
    """SNF and field-rank reports coincide; SNF torsion is squarefree with
    indices dividing the number of reflections."""
    cx = build_complex(system)
    exact = homology_snf(cx)
    fast = homology_fieldrank(cx)
    count = reflection_count(system)
    same = exact.same_modules(fast)
    support = all(count % d == 0 for d in exact.torsion_indices())
    ok = same and exact.squarefree and support
    problems = []
    if not same:
        problems.append("reports differ")
    if not exact.squarefree:
        problems.append("non-squarefree torsion")
    if not support:
        problems.append("torsion index not dividing #A")
    return CheckResult("engine-agreement", {"family": system.family, "rank": system.rank},
                       _verdict(ok), "; ".join(problems),
                       {"snf": exact.describe(), "field": fast.describe()})


def check_cohomology_shift(system):
    """Cohomology over every ``F_d`` from transposed boundaries equals the
    shifted homology multiplicities."""
    cx = build_complex(system)
    shifted = {}
    witness = {}
    ok = True
    for d in divisors(reflection_count(system)):
        alphas = multiplicities_from_dims(field_dims(cx, d))
        dims = cohomology_dims(cx, d)
        betas = cohomology_multiplicities(dims)
        # H^k = H_{k-1}: beta_k = alpha_{k-1}, beta_0 = 0
        expected = [0] + alphas[:-1]
        witness[f"d={d}"] = {"cohomology": betas, "shifted_homology": expected}
        ok &= betas == expected
        shifted[d] = expected
    report = cohomology_shift(homology_snf(cx))
    for d, expected in shifted.items():
        ok &= [report.multiplicity(d, k) if k < len(report.degrees) else 0
               for k in range(len(expected))] == expected
    return CheckResult("cohomology-shift", {"family": system.family, "rank": system.rank},
                       _verdict(ok), "" if ok else "dimension mismatch", witness)


# --- suites ---------------------------------------------------------------------------

def _all_specs(n):
    yield ComplexSpec()
    for variant in ("subg", "quotf", "quotmod"):
        for k in range(n + 1):
            yield ComplexSpec(variant, k)


def desk_jobs():
    """``(check name, args)`` pairs making up the desk profile."""
    jobs = []
    ranks = [("A", n) for n in range(1, 7)] + [("B", n) for n in range(1, 6)] + \
            [("D", n) for n in range(2, 6)]
    for f, n in ranks:
        jobs.append(("stability", (f, 0, n)))
    for f, k, n in [("A", 1, 4), ("A", 1, 5), ("A", 1, 6), ("B", 1, 3), ("B", 1, 4),
                    ("B", 1, 5), ("B", 2, 5), ("D", 1, 5)]:
        jobs.append(("stability", (f, k, n)))
        jobs.append(("rank-formula", (f, n, k)))
    for f, n in [("A", 4), ("A", 5), ("A", 6), ("B", 3), ("B", 4), ("B", 5), ("D", 5)]:
        jobs.append(("betti", (f, n)))
    for f, n in [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 1), ("B", 2), ("B", 3),
                 ("D", 2), ("D", 3)]:
        jobs.append(("engine-agreement", (f, n)))
    for f in "ABD":
        for n in range(2 if f == "D" else 1, 5):
            jobs.append(("dd-zero", (f, n)))
            jobs.append(("equivariance", (f, n)))
    for f, n, k in [("A", 3, 2), ("B", 3, 1), ("B", 3, 2), ("D", 4, 3)]:
        jobs.append(("direct-sum", (f, n, k)))
    jobs.append(("block-rank", (1,)))
    for q in (1, 2):
        jobs.append(("coprimality", ("A", q)))
    for n in range(2, 7):
        jobs.append(("coprimality", ("B", n)))
    for n in (2, 3):
        jobs.append(("annihilator", ("A", n, 1, 3)))
    for n in (3, 4):
        jobs.append(("dn-reduction", (n,)))
    for f, n in [("A", 1), ("A", 2), ("A", 3), ("B", 2)]:
        jobs.append(("cohomology-shift", (f, n)))
    return jobs


def extended_jobs():
    return desk_jobs() + [("stability", ("A", 2, 7, "modular"))]


def run_job(job):
    """Run one ``(name, args)`` job; always returns a list of ``CheckResult``."""
    name, args = job
    if name == "stability":
        family, k, n = args[:3]
        method = args[3] if len(args) > 3 else "auto"
        return [check_stability(family, k, n, method)]
    if name == "rank-formula":
        family, n, k = args
        return [check_rank_formula(make_system(family, n), k)]
    if name == "betti":
        return [check_betti(make_system(*args))]
    if name == "engine-agreement":
        return [check_engine_agreement(make_system(*args))]
    if name == "dd-zero":
        system = make_system(*args)
        return [check_boundary_squared(system, spec) for spec in _all_specs(system.rank)]
    if name == "equivariance":
        return [check_equivariance(make_system(*args))]
    if name == "direct-sum":
        family, n, k = args
        return [check_direct_sum(make_system(family, n), k)]
    if name == "block-rank":
        return [check_block_rank(*args)]
    if name == "coprimality":
        return [check_coprimality(*args)]
    if name == "annihilator":
        return [check_annihilator(*args)]
    if name == "dn-reduction":
        return [check_dn_reduction(*args)]
    if name == "cohomology-shift":
        return [check_cohomology_shift(make_system(*args))]
    if name == "filtration":
        return [check_filtration_triviality(*args)]
    raise ValueError(f"unknown check {name!r}")


def run_suite(jobs, workers=1):
    """Run jobs (in a process pool when ``workers > 1``) and return all
    results sorted by check name, then parameters."""
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run_job, jobs))
    else:
        batches = [run_job(job) for job in jobs]
    results = [r for batch in batches for r in batch]
    return sorted(results, key=lambda r: (r.name, repr(sorted(r.params.items()))))
