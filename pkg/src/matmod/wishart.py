"""Wishart matrices and orthogonal decomposition of gaussian arrays.

Sampling follows the definition: a ``W_p(df, sigma, delta)`` draw is
``sum_i (xi_i + a_i)(xi_i + a_i)^T`` with ``xi_i ~ N_p(0, sigma)`` iid and
fixed columns ``a_i`` whose scalar square is ``delta``. The law depends on the
``a_i`` only through ``delta``, so any factorization of ``delta`` will do; the
one used here puts the scaled eigenvectors of ``delta`` first and pads with
zero columns.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrays import Array, scalar_square
from .errors import ArgumentError, DecompositionError, ShapeError, SingularWishartWarning
from .matrices import as_square, check_spd, is_psd, psd_tolerance, sqrt_spd
from .random_arrays import stream
from .submodules import Submodule, project, projector

__all__ = [
    "WishartSpec",
    "DecompositionReport",
    "sample_wishart",
    "sample_wishart_many",
    "sample_wishart_with_means",
    "mean_columns_from_delta",
    "decompose",
    "sqrt_spd",
]

ORTHOGONALITY_TOL = 1e-8


def mean_columns_from_delta(delta, df: int) -> np.ndarray:
    """A ``p x df`` matrix ``A`` with ``A @ A.T == delta``."""
    delta = as_square(delta, "delta")
    p = delta.shape[0]
    tol = psd_tolerance(delta)
    w, v = np.linalg.eigh((delta + delta.T) / 2)
    keep = w > tol
    order = np.argsort(w[keep])[::-1]
    cols = v[:, keep][:, order] * np.sqrt(w[keep][order])
    if cols.shape[1] > df:
        raise ArgumentError(f"delta has rank {cols.shape[1]} > df={df}; not realizable")
    a = np.zeros((p, df))
    a[:, : cols.shape[1]] = cols
    return a


@dataclass(frozen=True, eq=False)
class WishartSpec:
    """Parameters of a (possibly noncentral) Wishart law ``W_p(df, sigma, delta)``."""

    df: int
    sigma: np.ndarray
    delta: np.ndarray | None = None
    root: np.ndarray = field(init=False, repr=False)
    mean_columns: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.df) < 1:
            raise ArgumentError(f"df must be >= 1, got {self.df}")
        object.__setattr__(self, "df", int(self.df))
        sigma = check_spd(self.sigma)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "root", sqrt_spd(sigma))
        p = sigma.shape[0]
        if self.delta is None:
            a = np.zeros((p, self.df))
        else:
            delta = as_square(self.delta, "delta", p)
            if not is_psd(delta):
                raise ArgumentError("delta must be symmetric nonnegative definite")
            object.__setattr__(self, "delta", delta)
            a = mean_columns_from_delta(delta, self.df)
        object.__setattr__(self, "mean_columns", a)

    @property
    def p(self) -> int:
        return self.sigma.shape[0]

    @property
    def mean(self) -> np.ndarray:
        """Expectation ``df * sigma + delta``."""
        d = self.delta if self.delta is not None else 0.0
        return self.df * self.sigma + d


def _warn_if_singular(p: int, df: int) -> None:
    if df < p:
        warnings.warn(
            f"Wishart draw with df={df} < p={p} is singular", SingularWishartWarning, stacklevel=3
        )


def sample_wishart_with_means(a, sigma, seed: int, index: int = 0) -> np.ndarray:
    """``sum_i (xi_i + a_i)(xi_i + a_i)^T`` for the columns ``a_i`` of ``a``."""
    a = np.asarray(a, dtype=float)
    root = sqrt_spd(check_spd(sigma))
    p, df = a.shape
    if root.shape[0] != p:
        raise ShapeError(f"means are {a.shape}, sigma is {root.shape}")
    _warn_if_singular(p, df)
    xi = root @ stream(seed, index).standard_normal((p, df)) + a
    w = xi @ xi.T
    return (w + w.T) / 2


def sample_wishart(spec: WishartSpec, seed: int, index: int = 0) -> np.ndarray:
    _warn_if_singular(spec.p, spec.df)
    xi = spec.root @ stream(seed, index).standard_normal((spec.p, spec.df)) + spec.mean_columns
    w = xi @ xi.T
    return (w + w.T) / 2


def sample_wishart_many(spec: WishartSpec, replicates: int, seed: int, start: int = 0) -> np.ndarray:
    """``(R, p, p)`` stack of draws; draw ``k`` uses stream ``start + k``."""
    _warn_if_singular(spec.p, spec.df)
    z = np.stack(
        [stream(seed, start + k).standard_normal((spec.p, spec.df)) for k in range(replicates)]
    )
    xi = np.matmul(spec.root, z) + spec.mean_columns
    w = np.matmul(xi, xi.transpose(0, 2, 1))
    return (w + w.transpose(0, 2, 1)) / 2


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    projections: list[Array]
    squares: list[np.ndarray]
    dims: list[int]
    deltas: list[np.ndarray] | None = None


def check_orthogonal_parts(parts: Sequence[Submodule], n: int) -> None:
    if not parts:
        raise DecompositionError("need at least one part")
    if any(part.n != n for part in parts):
        raise DecompositionError("parts live in different ambient spaces")
    projectors = [projector(part) for part in parts]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            cross = np.max(np.abs(projectors[i] @ projectors[j]), initial=0.0)
            if cross > ORTHOGONALITY_TOL:
                raise DecompositionError(f"parts {i} and {j} are not orthogonal ({cross:.3g})")
    total = sum(part.r for part in parts)
    if total != n:
        raise DecompositionError(f"part dimensions sum to {total}, expected {n}")


def decompose(x: Array, parts: Sequence[Submodule], mean: Array | None = None) -> DecompositionReport:
    """Split ``x`` into its projections on pairwise orthogonal spanning parts.

    When ``mean`` (the expectation of ``x``) is given, the report also carries
    the noncentrality ``<proj mean, proj mean>`` of every part.
    """
    check_orthogonal_parts(parts, x.n)
    projections = [project(x, part) for part in parts]
    squares = [scalar_square(pr) for pr in projections]
    deltas = None
    if mean is not None:
        if mean.shape != x.shape:
            raise ShapeError("mean and data shapes differ")
        deltas = [scalar_square(project(mean, part)) for part in parts]
    return DecompositionReport(projections, squares, [part.r for part in parts], deltas)
