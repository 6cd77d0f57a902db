"""Linear hypotheses ``H: E X in L1`` inside a model ``E X in L``.

With ``L2`` the orthogonal complement of ``L1`` in ``L``, the residual square
``S1 = <proj_{L-perp} X, .>`` and the hypothesis square
``S2 = <proj_{L2} X, .>`` are independent Wishart matrices. The roots of
``det(S2 - lambda S1) = 0`` have a null law free of ``(M, Sigma)``; the test
statistics are functions of those roots, calibrated here by simulating the
null at ``M = 0, Sigma = I``.

Root functionals provided: Wilks' lambda ``prod 1/(1+l)``, the
Lawley-Hotelling trace ``sum l``, Pillai's trace ``sum l/(1+l)`` and Roy's
largest root. Small Wilks values and large values of the others are evidence
against ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .arrays import Array, scalar_square
from .errors import (
    ArgumentError,
    DegreesOfFreedomError,
    NumericalConsistencyError,
    ShapeError,
    SingularityError,
)
from .matrices import as_square, check_spd, sqrt_spd
from .random_arrays import check_seed, stream
from .submodules import Submodule, complement, complement_within, project

STATISTICS = ("wilks_lambda", "lawley_hotelling", "pillai", "roy_largest")
LOWER_TAIL = frozenset({"wilks_lambda"})
ROOT_FLOOR = -1e-9
MAX_CONDITION = 1e12
MIN_REPLICATES = 1000


@dataclass(frozen=True, eq=False)
class HypothesisSpec:
    """Model submodule ``l`` and hypothesis submodule ``l1`` contained in it."""

    l: Submodule
    l1: Submodule
    l2: Submodule = field(init=False, repr=False)
    l_perp: Submodule = field(init=False, repr=False)

    def __post_init__(self):
        if self.l.n != self.l1.n:
            raise ShapeError("model and hypothesis live in different ambient spaces")
        if not self.l.contains(self.l1):
            raise ArgumentError("hypothesis submodule is not contained in the model")
        object.__setattr__(self, "l2", complement_within(self.l, self.l1))
        object.__setattr__(self, "l_perp", complement(self.l))

    @property
    def n(self) -> int:
        return self.l.n

    @property
    def m(self) -> int:
        return self.l.r

    @property
    def m1(self) -> int:
        return self.l1.r

    @property
    def m2(self) -> int:
        return self.l2.r

    def dims(self, p: int) -> dict[str, int]:
        return {"n": self.n, "m": self.m, "m1": self.m1, "m2": self.m2, "p": p}


@dataclass(frozen=True, eq=False)
class TestReport:
    s1: np.ndarray
    s2: np.ndarray
    roots: np.ndarray
    stats: dict[str, float]
    dims: dict[str, int]
    pvalues: dict[str, float] | None = None
    replicates: int | None = None
    seed: int | None = None

    __test__ = False  # not a pytest class


def _clamp_roots(roots: np.ndarray) -> np.ndarray:
    low = np.min(roots, initial=0.0)
    if low < ROOT_FLOOR:
        raise NumericalConsistencyError(f"negative root {low:.3g} below {ROOT_FLOOR}")
    return np.clip(roots, 0.0, None)


def generalized_eigen(s2, s1) -> np.ndarray:
    """Roots of ``det(s2 - lambda s1) = 0``, descending.

    Reduced to the symmetric problem ``L^-1 s2 L^-T`` with ``s1 = L L^T``.
    """
    s1 = as_square(s1, "s1")
    s2 = as_square(s2, "s2", s1.shape[0])
    cond = np.linalg.cond(s1)
    try:
        chol = np.linalg.cholesky(s1)
    except np.linalg.LinAlgError:
        raise SingularityError(f"s1 is singular: not positive definite (cond={cond:.3g})", cond) from None
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularityError(f"s1 is numerically singular (cond={cond:.3g})", cond)
    a = scipy.linalg.solve_triangular(chol, s2, lower=True)
    c = scipy.linalg.solve_triangular(chol, a.T, lower=True)
    roots = np.linalg.eigvalsh((c + c.T) / 2)[::-1]
    return _clamp_roots(roots)


def generalized_eigen_many(s2: np.ndarray, s1: np.ndarray) -> np.ndarray:
    """Batched :func:`generalized_eigen` over ``(R, p, p)`` stacks; returns ``(R, p)``."""
    try:
        chol = np.linalg.cholesky(s1)
    except np.linalg.LinAlgError:
        raise SingularityError("a residual square in the batch is singular") from None
    a = np.linalg.solve(chol, s2)
    c = np.linalg.solve(chol, a.transpose(0, 2, 1))
    roots = np.linalg.eigvalsh((c + c.transpose(0, 2, 1)) / 2)[:, ::-1]
    return _clamp_roots(roots)


def root_functionals(roots) -> dict[str, float]:
    r = np.asarray(roots, dtype=float)
    out = root_functionals_many(r[np.newaxis, :])
    return {k: float(v[0]) for k, v in out.items()}


def root_functionals_many(roots: np.ndarray) -> dict[str, np.ndarray]:
    return {
        "wilks_lambda": np.prod(1.0 / (1.0 + roots), axis=1),
        "lawley_hotelling": roots.sum(axis=1),
        "pillai": (roots / (1.0 + roots)).sum(axis=1),
        "roy_largest": roots[:, 0] if roots.shape[1] else np.zeros(len(roots)),
    }


def _check_dof(spec: HypothesisSpec, p: int) -> None:
    if spec.n - spec.m < p:
        raise DegreesOfFreedomError(
            f"testing needs n - m >= p (n={spec.n}, m={spec.m}, p={p})"
        )


def test_statistics(x: Array, spec: HypothesisSpec) -> TestReport:
    """``S1``, ``S2``, the roots and their functionals for data ``x``."""
    if x.n != spec.n:
        raise ShapeError(f"data has n={x.n}, model ambient is {spec.n}")
    _check_dof(spec, x.p)
    s1 = scalar_square(project(x, spec.l_perp))
    s2 = scalar_square(project(x, spec.l2))
    roots = generalized_eigen(s2, s1)
    return TestReport(s1, s2, roots, root_functionals(roots), spec.dims(x.p))


test_statistics.__test__ = False


def _squares_many(data: np.ndarray, part: Submodule) -> np.ndarray:
    y = data @ part.basis.T
    return np.matmul(y, y.transpose(0, 2, 1))


def simulate_roots(
    spec: HypothesisSpec,
    p: int,
    replicates: int,
    seed: int,
    mean: Array | None = None,
    sigma=None,
) -> np.ndarray:
    """Roots for ``replicates`` simulated data sets, shape ``(R, p)``.

    Data are ``mean + sigma^{1/2} Z`` with ``Z`` standard gaussian; the
    defaults ``mean = 0, sigma = I`` give the null law used for p-values.
    Replicate ``k`` draws from stream ``k`` of ``seed``.
    """
    _check_dof(spec, p)
    seed = check_seed(seed)
    z = np.stack([stream(seed, k).standard_normal((p, spec.n)) for k in range(replicates)])
    if sigma is not None:
        z = np.matmul(sqrt_spd(check_spd(sigma)), z)
    if mean is not None:
        if mean.shape != (p, spec.n):
            raise ShapeError(f"mean is {mean.shape}, expected {(p, spec.n)}")
        z = z + mean.data
    return generalized_eigen_many(_squares_many(z, spec.l2), _squares_many(z, spec.l_perp))


def empirical_pvalue(null: np.ndarray, observed: float, lower_tail: bool = False) -> float:
    """``(1 + #{null at least as extreme}) / (R + 1)``."""
    hits = np.count_nonzero(null <= observed) if lower_tail else np.count_nonzero(null >= observed)
    return (1.0 + hits) / (len(null) + 1.0)


def monte_carlo_pvalues(report: TestReport, spec: HypothesisSpec, replicates: int, seed: int) -> TestReport:
    if replicates < MIN_REPLICATES:
        raise ArgumentError(f"need at least {MIN_REPLICATES} replicates, got {replicates}")
    p = report.dims["p"]
    null = root_functionals_many(simulate_roots(spec, p, replicates, seed))
    if any(len(v) != replicates for v in null.values()):
        raise RuntimeError("null simulation returned the wrong number of replicates")
    pvalues = {
        name: empirical_pvalue(null[name], report.stats[name], name in LOWER_TAIL)
        for name in STATISTICS
    }
    return replace(report, pvalues=pvalues, replicates=replicates, seed=seed)


def ratio_roots_from_wisharts(p: int, m2: int, dof: int, sigma, replicates: int, seed: int) -> np.ndarray:
    """Eigenvalues of ``sigma^{1/2} W2 W1^{-1} sigma^{-1/2}`` for independent
    ``W2 ~ W_p(m2, I)`` and ``W1 ~ W_p(dof, I)``, descending, shape ``(R, p)``.

    Computed from the non-symmetric product directly, as an independent route
    to the root distribution.
    """
    root = sqrt_spd(check_spd(sigma))
    root_inv = np.linalg.inv(root)
    out = np.empty((replicates, p))
    for k in range(replicates):
        g = stream(seed, k)
        a = g.standard_normal((p, m2))
        b = g.standard_normal((p, dof))
        w2, w1 = a @ a.T, b @ b.T
        ratio = root @ w2 @ np.linalg.inv(w1) @ root_inv
        ev = np.linalg.eigvals(ratio)
        out[k] = np.sort(ev.real)[::-1]
    return out
