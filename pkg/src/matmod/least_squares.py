"""Matrix and scalar (trace) least squares over a submodule.

The matrix problem minimizes ``(X - Z)(X - Z)^T`` over ``Z`` in the submodule
in the partial order of symmetric matrices; the scalar problem minimizes its
trace. Both are solved by projection and give the same fitted array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import Array, scalar_square
from .errors import ShapeError
from .submodules import Submodule, project


@dataclass(frozen=True)
class LsSolution:
    fitted: Array
    residual_square: np.ndarray


def matrix_objective(x: Array, z: Array) -> np.ndarray:
    """``sum_i (X_i - Z_i)(X_i - Z_i)^T``."""
    return scalar_square(x - z)


def trace_objective(x: Array, z: Array) -> float:
    d = x.data - z.data
    return float(np.sum(d * d))


def matrix_ls(x: Array, l: Submodule) -> LsSolution:
    fitted = project(x, l)
    return LsSolution(fitted, scalar_square(x - fitted))


def trace_ls(x: Array, l: Submodule) -> LsSolution:
    """Minimize the trace objective.

    The trace separates into one ordinary least-squares problem per response
    row, so each row of ``x`` is fitted to the generating subspace on its own
    through the orthonormal basis coefficients.
    """
    if x.n != l.n:
        raise ShapeError(f"array has n={x.n}, submodule ambient is {l.n}")
    b = l.basis
    rows = [(row @ b.T) @ b for row in x.data]
    fitted = Array(np.vstack(rows)) if rows else Array.zeros(x.p, x.n)
    return LsSolution(fitted, scalar_square(x - fitted))


def sample_in(l: Submodule, p: int, rng: np.random.Generator, scale: float = 1.0) -> Array:
    """Random array of the submodule ``l`` (gaussian p-column coefficients)."""
    coef = scale * rng.standard_normal((p, l.r))
    return Array(coef @ l.basis if l.r else np.zeros((p, l.n)))
