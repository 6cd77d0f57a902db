"""Random arrays: gaussian sampling, covariance arrays, seeded streams.

Random numbers come from NumPy's Philox4x64-10 counter-based generator. The
generator for replicate ``k`` of a run seeded with ``seed`` is keyed by
``SeedSequence(seed, spawn_key=(k,))``, so every replicate has its own stream
and Monte Carlo results do not depend on the order replicates are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrays import Array
from .errors import ArgumentError, ShapeError
from .matrices import as_square, check_spd, sqrt_spd

RNG_ALGORITHM = "numpy.random.Philox (Philox4x64-10), SeedSequence(seed, spawn_key=(stream,))"
SEED_MAX = 2**64 - 1


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ArgumentError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator number ``index`` of the run seeded with ``seed``."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """Gaussian array with independent columns ``X_i ~ N_p(mean_i, sigma)``."""

    mean: Array
    sigma: np.ndarray
    seed: int = 0
    root: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        sigma = check_spd(self.sigma)
        if sigma.shape[0] != self.mean.p:
            raise ShapeError(f"sigma is {sigma.shape}, mean has p={self.mean.p}")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "seed", check_seed(self.seed))
        object.__setattr__(self, "root", sqrt_spd(sigma))

    @classmethod
    def standard(cls, p: int, n: int, seed: int = 0) -> "GaussianSpec":
        return cls(Array.zeros(p, n), np.eye(p), seed)

    @property
    def p(self) -> int:
        return self.mean.p

    @property
    def n(self) -> int:
        return self.mean.n


def sample(spec: GaussianSpec, index: int = 0) -> Array:
    """Draw replicate ``index`` of the gaussian array described by ``spec``."""
    z = stream(spec.seed, index).standard_normal((spec.p, spec.n))
    return Array(spec.mean.data + spec.root @ z)


def sample_many(spec: GaussianSpec, replicates: int, start: int = 0) -> np.ndarray:
    """Replicates ``start .. start+replicates-1`` stacked as ``(R, p, n)``.

    Entry ``k`` equals ``sample(spec, start + k).data`` up to rounding.
    """
    z = np.stack(
        [stream(spec.seed, start + k).standard_normal((spec.p, spec.n)) for k in range(replicates)]
    )
    return spec.mean.data + np.matmul(spec.root, z)


@dataclass(frozen=True, eq=False)
class CovarianceArray:
    """``n x n`` grid of ``p x p`` blocks; block ``(i, j)`` is ``Cov(X_i, X_j)``.

    ``blocks`` has shape ``(n, n, p, p)``.
    """

    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=float)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise ShapeError(f"blocks must have shape (n, n, p, p), got {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def p(self) -> int:
        return self.blocks.shape[2]

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def is_consistent(self, tol: float = 1e-10) -> bool:
        """Block ``(j, i)`` is the transpose of block ``(i, j)``."""
        return bool(
            np.max(np.abs(self.blocks - self.blocks.transpose(1, 0, 3, 2)), initial=0.0) <= tol
        )


def iid_covariance(n: int, sigma) -> CovarianceArray:
    """Covariance array ``{delta_ij sigma}`` of independent columns."""
    sigma = as_square(sigma, "sigma")
    blocks = np.einsum("ij,ab->ijab", np.eye(n), sigma)
    return CovarianceArray(blocks)


def _stack(samples: Sequence) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        data = np.asarray(samples, dtype=float)
    else:
        shapes = {np.shape(s.data if isinstance(s, Array) else s) for s in samples}
        if len(shapes) > 1:
            raise ShapeError(f"samples have differing shapes: {sorted(shapes)}")
        data = np.stack([np.asarray(s.data if isinstance(s, Array) else s, dtype=float) for s in samples])
    if data.ndim != 3:
        raise ShapeError(f"samples must stack to (R, p, n), got {data.shape}")
    return data


def empirical_covariance_array(samples) -> CovarianceArray:
    """Sample covariance array of replicated arrays.

    ``samples`` is a sequence of arrays of one shape, or an ``(R, p, n)``
    stack. Divides by the replicate count ``R``.
    """
    data = _stack(samples)
    if data.shape[0] < 2:
        raise ArgumentError("need at least two samples")
    centred = data - data.mean(axis=0)
    blocks = np.einsum("rai,rbj->ijab", centred, centred) / data.shape[0]
    return CovarianceArray(blocks)


def covariance_block_se(samples) -> np.ndarray:
    """Standard errors of the entries of :func:`empirical_covariance_array`.

    Each block entry is a mean of per-replicate products; its standard error
    is the standard deviation of those products over ``sqrt(R)``.
    """
    data = _stack(samples)
    centred = data - data.mean(axis=0)
    products = np.einsum("rai,rbj->rijab", centred, centred)
    return products.std(axis=0, ddof=1) / np.sqrt(data.shape[0])


def transform_covariance(v: CovarianceArray, q) -> CovarianceArray:
    """Covariance array of ``T Q`` given that of ``T``: ``Q^T (Var T) Q`` blockwise."""
    q = as_square(q, "q", v.n)
    return CovarianceArray(np.einsum("ki,lj,klab->ijab", q, q, v.blocks))


def transform_mean(mean: Array, q) -> Array:
    """Expectation of ``T Q``: ``(E T) Q``."""
    return Array(mean.data @ as_square(q, "q", mean.n))
