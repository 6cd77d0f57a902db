"""Gaussian linear models ``X = M + E`` with ``M`` in a submodule.

The fitted mean is the projection of the data onto the model submodule and the
residual scalar square divided by the residual dimension estimates the column
covariance. Together the projection and the residual square are sufficient
for ``(M, Sigma)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrays import Array, scalar_square
from .errors import ArgumentError, DegreesOfFreedomError, NonUniquenessError, ShapeError
from .matrices import check_spd
from .submodules import Submodule, from_rows, project


@dataclass(frozen=True, eq=False)
class ModelSpec:
    l: Submodule
    labels: tuple[str, ...] | None = None
    design: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.l.n

    @property
    def m(self) -> int:
        return self.l.r


@dataclass(frozen=True, eq=False)
class ModelFit:
    """Result of :func:`fit`.

    ``sigma_hat`` raises :class:`DegreesOfFreedomError` for a saturated model
    (``n == m``); everything else is always available.
    """

    m_hat: Array
    residual: Array
    residual_square: np.ndarray
    n: int
    m: int
    p: int

    @property
    def dof(self) -> int:
        return self.n - self.m

    @property
    def sigma_hat(self) -> np.ndarray:
        if self.dof < 1:
            raise DegreesOfFreedomError(
                f"covariance estimate needs n - m >= 1 (n={self.n}, m={self.m})"
            )
        return self.residual_square / self.dof


def one_way_layout(group_sizes: Sequence[int], labels: Sequence[str] | None = None) -> ModelSpec:
    """Model of ``m`` samples with group-specific means.

    Observations are ordered group by group; the submodule is spanned by the
    ``m`` block indicator rows.
    """
    sizes = [int(s) for s in group_sizes]
    if not sizes:
        raise ArgumentError("need at least one group")
    if any(s < 1 for s in sizes):
        raise ArgumentError(f"every group needs at least one observation, got {sizes}")
    n = sum(sizes)
    rows = np.zeros((len(sizes), n))
    start = 0
    for j, s in enumerate(sizes):
        rows[j, start:start + s] = 1.0
        start += s
    # indicator rows are already orthogonal; normalize instead of re-orthogonalizing
    basis = rows / np.sqrt(np.array(sizes, dtype=float))[:, np.newaxis]
    names = tuple(labels) if labels is not None else None
    return ModelSpec(Submodule(basis), names, rows)


def indicator_rows(group_sizes: Sequence[int]) -> np.ndarray:
    return one_way_layout(group_sizes).design


def regression_design(x_design, labels: Sequence[str] | None = None) -> ModelSpec:
    """Model generated by the rows of an ``m x n`` design matrix."""
    d = np.array(x_design, dtype=float)
    if d.ndim == 1:
        d = d[np.newaxis, :]
    if d.ndim != 2 or d.shape[0] == 0:
        raise ArgumentError("design must have at least one row")
    if not np.all(np.isfinite(d)):
        raise ArgumentError("design has non-finite entries")
    names = tuple(labels) if labels is not None else None
    return ModelSpec(from_rows(d), names, d)


def fit(x: Array, spec: ModelSpec) -> ModelFit:
    if x.n != spec.n:
        raise ShapeError(f"data has n={x.n}, model ambient is {spec.n}")
    m_hat = project(x, spec.l)
    residual = x - m_hat
    return ModelFit(m_hat, residual, scalar_square(residual), x.n, spec.m, x.p)


def regression_coefficients(model_fit: ModelFit, x_design) -> np.ndarray:
    """Coefficients ``A`` (``p x m``) with ``A @ x_design = m_hat``."""
    d = np.array(x_design, dtype=float)
    if d.ndim == 1:
        d = d[np.newaxis, :]
    if d.shape[1] != model_fit.n:
        raise ShapeError(f"design has {d.shape[1]} columns, data has n={model_fit.n}")
    rank = from_rows(d).r
    if rank < d.shape[0]:
        raise NonUniquenessError(
            f"design has rank {rank} < {d.shape[0]} rows; coefficients are not unique"
        )
    coef, *_ = np.linalg.lstsq(d.T, model_fit.m_hat.data.T, rcond=None)
    return coef.T


def log_likelihood(x: Array, mean: Array, sigma) -> float:
    """Gaussian log-likelihood of ``(M, Sigma)`` evaluated column by column."""
    sigma = check_spd(sigma)
    p = x.p
    _, logdet = np.linalg.slogdet(sigma)
    inv = np.linalg.inv(sigma)
    total = 0.0
    for xi, mi in zip(x.data.T, mean.data.T):
        d = xi - mi
        total += -0.5 * p * np.log(2 * np.pi) - 0.5 * logdet - 0.5 * d @ inv @ d
    return float(total)


def log_likelihood_sufficient(m_hat: Array, residual_square, mean: Array, sigma) -> float:
    """The same log-likelihood written through ``(m_hat, residual_square)`` only."""
    sigma = check_spd(sigma)
    p, n = m_hat.shape
    _, logdet = np.linalg.slogdet(sigma)
    spread = np.asarray(residual_square) + scalar_square(m_hat - mean)
    quad = np.trace(np.linalg.solve(sigma, spread))
    return float(-0.5 * n * p * np.log(2 * np.pi) - 0.5 * n * logdet - 0.5 * quad)
