import pytest

from salvhom.coxeter import make_system
from salvhom.errors import RangeViolation
from salvhom.theorems import (FAIL, PASS, SKIPPED, CheckResult, betti, check_annihilator,
                              check_betti, check_boundary_squared, check_coprimality,
                              check_direct_sum, check_dn_reduction, check_engine_agreement,
                              check_equivariance, check_filtration_triviality,
                              check_rank_formula, check_stability, desk_jobs, product_formula,
                              run_suite, stable_range)


def test_product_formula():
    assert product_formula("A", 2) == (1, 3, 2)
    assert product_formula("B", 3) == (1, 9, 23, 15)
    assert product_formula("D", 4) == (1, 12, 50, 84, 45)


@pytest.mark.parametrize("family,n,expected", [("A", 1, (1, 1)), ("A", 2, (1, 3, 2)),
                                               ("B", 3, (1, 9, 23, 15))])
def test_betti_examples(family, n, expected):
    assert betti(make_system(family, n)).values == expected


def test_betti_truncated():
    assert betti(make_system("B", 4), max_degree=2).values == (1, 16)


def test_stable_range():
    assert stable_range("A", 1, 4) and not stable_range("A", 1, 3)
    assert stable_range("B", 1, 3) and not stable_range("B", 2, 4)
    assert stable_range("D", 1, 5) and not stable_range("D", 1, 4)


def test_stability_examples():
    r = check_stability("A", 0, 2)
    assert r.passed and not r.informational
    r = check_stability("A", 1, 4)
    assert r.passed and r.witness["H"]["torsion"] == [{"d": 1, "mult": 9}]
    r = check_stability("B", 1, 3)
    assert r.passed and r.witness["H"]["torsion"] == [{"d": 1, "mult": 8}]


def test_stability_outside_range_is_informational():
    r = check_stability("A", 1, 3)
    assert r.informational and not r.counts


def test_rank_formula_examples():
    assert check_rank_formula(make_system("A", 4), 1).witness["alpha_1"] == 9
    assert check_rank_formula(make_system("A", 1), 0).passed
    r = check_rank_formula(make_system("B", 4), 1)
    assert r.passed and r.witness["alpha_1"] == 15
    with pytest.raises(RangeViolation):
        check_rank_formula(make_system("A", 2), 1)


def test_direct_sum_examples():
    r = check_direct_sum(make_system("A", 3), 2)
    assert r.passed and r.witness["copies"] == 4
    r = check_direct_sum(make_system("B", 3), 1)
    assert r.passed and r.witness["copies"] == 24
    r = check_direct_sum(make_system("A", 3), 3)
    assert r.passed and r.witness["copies"] == 1


def test_filtration():
    assert check_filtration_triviality("A", 3, 2, 1).reason.endswith("vacuous")
    assert check_filtration_triviality("B", 3, 1, 1).verdict == PASS
    assert check_filtration_triviality("A", 3, 1, 1).verdict == PASS


def test_coprimality():
    assert check_coprimality("A", 1).witness["counts"] == [10, 3]
    assert check_coprimality("A", 1).passed
    assert check_coprimality("B", 4).witness["counts"] == [16, 9]
    assert check_coprimality("A", 0).verdict == SKIPPED


def test_annihilator():
    assert check_annihilator("A", 2, 1, 3).passed
    assert check_annihilator("A", 3, 1, 3).passed
    assert check_annihilator("A", 3, 1, 6).passed


def test_dn_reduction():
    assert check_dn_reduction(3).passed


def test_structural_small():
    s = make_system("B", 2)
    assert check_equivariance(s, samples=100).passed
    assert check_boundary_squared(s).passed
    assert check_betti(s).passed
    assert check_engine_agreement(s).passed


def test_check_result_rendering():
    r = CheckResult("demo", {"b": 2, "a": 1}, FAIL, "broken")
    assert r.line().startswith("FAIL    demo(a=1, b=2)")
    assert r.to_dict()["verdict"] == FAIL
    assert r.counts and not r.passed


def test_suite_is_sorted_and_parallel_safe():
    jobs = [("coprimality", ("B", n)) for n in (4, 2, 3)] + [("dd-zero", ("A", 2))]
    serial = run_suite(jobs, 1)
    parallel = run_suite(jobs, 2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]
    names = [(r.name, repr(sorted(r.params.items()))) for r in serial]
    assert names == sorted(names)


def test_desk_profile_covers_checks():
    names = {name for name, _ in desk_jobs()}
    assert {"stability", "rank-formula", "betti", "engine-agreement", "dd-zero",
            "equivariance", "direct-sum", "block-rank", "coprimality", "annihilator",
            "dn-reduction", "cohomology-shift"} <= names
