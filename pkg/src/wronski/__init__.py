"""Rational functions with prescribed critical points: counts by four routes
and numerical reconstruction of every class."""

from .bethe import (
    CriticalOrbit,
    MasterProblem,
    ReconstructedClass,
    SolverConfig,
    VerificationReport,
    boundary_class,
    exact_k1_oracle,
    master_log_gradient,
    reconstruct_class,
    sample_generic_z,
    solve_orbits,
    verify_class,
)
from .combinatorics import (
    ProblemSpec,
    binomial,
    catalan,
    count_classes,
    dim_sing_formula,
    genfun_coefficients,
    sharp_formula,
)
from .polywronski import ExactPolynomial, NumericPolynomial, PolyPlane, wronskian
from .schubert import intersection_number
from .sl2rep import dim_sing_oracle, tensor_decompose, weight_multiplicities

__version__ = "0.1.0"
