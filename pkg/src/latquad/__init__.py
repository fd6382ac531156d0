"""Rank-1 lattice quadrature with tent-transformed and symmetrized rules.

The package builds lattice point sets, evaluates reproducing kernels for
four weighted function-space families, computes worst-case errors by
kernel double sums and by closed forms, constructs generating vectors
component by component, and runs convergence studies on two families of
test integrands.
"""
from .bench import (
    ConvergenceRecord,
    TestFunction,
    VARIANTS,
    converge_study,
    eval_g,
    eval_h,
    fit_slope,
    integrate,
    records_to_csv,
)
from .cbc import CbcResult, candidate_set, cbc_construct
from .kernels import (
    DEFAULT_POLICY,
    FAMILIES,
    KernelValue,
    QuadratureAccuracyError,
    SpaceSpec,
    TruncationBudgetError,
    TruncationPolicy,
    bernoulli_poly,
    cosine_coeff,
    cosine_kernel_partial,
    fourier_coeff,
    kernel_eval,
    kernel_factor,
    korobov_omega,
    r_weight,
    r_weight_product,
    series_kmax,
    series_tail_bound,
    zeta,
)
from .points import (
    LatticeRule,
    WeightedPointSet,
    dual_lattice,
    lattice_points,
    read_vector_file,
    symmetrize,
    symmetrized_node_count,
    tent,
    tent_transform,
    write_vector_file,
)
from .wce import (
    WceMethod,
    WceResult,
    cbc_bound_constant,
    wce_cosine_sym,
    wce_cosine_tent,
    wce_double_sum,
    wce_korcos_sym,
    wce_korobov_lattice,
)

__all__ = [
    "ConvergenceRecord",
    "TestFunction",
    "VARIANTS",
    "converge_study",
    "eval_g",
    "eval_h",
    "fit_slope",
    "integrate",
    "records_to_csv",
    "CbcResult",
    "candidate_set",
    "cbc_construct",
    "DEFAULT_POLICY",
    "FAMILIES",
    "KernelValue",
    "QuadratureAccuracyError",
    "SpaceSpec",
    "TruncationBudgetError",
    "TruncationPolicy",
    "bernoulli_poly",
    "cosine_coeff",
    "cosine_kernel_partial",
    "fourier_coeff",
    "kernel_eval",
    "kernel_factor",
    "korobov_omega",
    "r_weight",
    "r_weight_product",
    "series_kmax",
    "series_tail_bound",
    "zeta",
    "LatticeRule",
    "WeightedPointSet",
    "dual_lattice",
    "lattice_points",
    "read_vector_file",
    "symmetrize",
    "symmetrized_node_count",
    "tent",
    "tent_transform",
    "write_vector_file",
    "WceMethod",
    "WceResult",
    "cbc_bound_constant",
    "wce_cosine_sym",
    "wce_cosine_tent",
    "wce_double_sum",
    "wce_korcos_sym",
    "wce_korobov_lattice",
    "main",
]

from .cli import main  # noqa: E402  (imports the modules above)

__version__ = "0.1.0"
