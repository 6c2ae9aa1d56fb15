"""Homology of Salvetti complexes of type A, B and D Artin groups with
coefficients in the rank-one local system over ``Q[t, t^-1]``."""

from .coxeter import CoxeterSystem, make_system
from .homology import (HomologyReport, compute_homology, field_dims, homology_fieldrank,
                       homology_snf)
from .laurent import LaurentPoly
from .salvetti import ChainComplex, ComplexSpec, build_complex
from .snf import snf
from .theorems import CheckResult, betti

__all__ = [
    "CheckResult", "ChainComplex", "ComplexSpec", "CoxeterSystem", "HomologyReport",
    "LaurentPoly", "betti", "build_complex", "compute_homology", "field_dims",
    "homology_fieldrank", "homology_snf", "make_system", "snf",
]
