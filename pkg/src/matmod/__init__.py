"""Multivariate linear models over the module of p x n arrays.

Arrays of p-columns with the matrix-valued scalar product, projection onto
submodules, gaussian linear models, Wishart decompositions and tests of linear
hypotheses through the roots of ``det(S2 - lambda S1) = 0``.
"""

from .arrays import (
    Array,
    add,
    is_orthogonal,
    left_mul,
    orthogonal_transform,
    right_mul,
    scalar_product,
    scalar_square,
)
from .hypothesis import (
    HypothesisSpec,
    TestReport,
    generalized_eigen,
    monte_carlo_pvalues,
    root_functionals,
    test_statistics,
)
from .least_squares import LsSolution, matrix_ls, trace_ls
from .linear_models import ModelFit, ModelSpec, fit, one_way_layout, regression_coefficients, regression_design
from .random_arrays import (
    CovarianceArray,
    GaussianSpec,
    empirical_covariance_array,
    sample,
    transform_covariance,
)
from .submodules import (
    Coordinates,
    Submodule,
    change_basis,
    complement,
    coordinates,
    from_rows,
    project,
    projector,
)
from .wishart import DecompositionReport, WishartSpec, decompose, sample_wishart, sqrt_spd

__version__ = "0.1.0"
