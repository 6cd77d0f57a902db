"""Submodules of array space and projection onto them.

Every submodule of the space of ``p x n`` arrays is generated by a linear
subspace ``L`` of n-rows: it consists of the arrays ``sum_k a_k f_k`` with
p-column coefficients ``a_k`` and rows ``f_k`` spanning ``L``. A
:class:`Submodule` therefore stores nothing but an orthonormal basis of ``L``,
and projecting an array onto the submodule is right multiplication by the
orthogonal projector of ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import Array
from .errors import ArgumentError, InvertibilityError, ShapeError
from .matrices import as_square

RANK_CUTOFF = 1e-10
MAX_CONDITION = 1e12
SAME_TOL = 1e-8


def orthonormalize(rows, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the span of ``rows`` by modified Gram-Schmidt.

    The next pivot is always the remaining row with the largest residual norm
    (lowest index on ties), and each accepted vector is reorthogonalized once
    against the basis built so far. Elimination stops when the largest
    residual norm is at most ``1e-10 * scale``; ``scale`` defaults to the
    largest input row norm.

    Returns an ``r x n`` matrix with orthonormal rows, ``r`` being the
    numerical rank.
    """
    w = np.array(rows, dtype=float)
    if w.ndim != 2:
        raise ShapeError(f"rows must form a 2-d grid, got {w.ndim}-d")
    k, n = w.shape
    if k == 0:
        return np.zeros((0, n))
    if scale is None:
        scale = float(np.max(np.linalg.norm(w, axis=1)))
    cutoff = RANK_CUTOFF * scale
    basis: list[np.ndarray] = []
    active = np.ones(k, dtype=bool)
    for _ in range(min(k, n)):
        norms = np.where(active, np.linalg.norm(w, axis=1), -1.0)
        j = int(np.argmax(norms))
        if norms[j] <= cutoff:
            break
        q = w[j] / norms[j]
        for b in basis:
            q = q - (b @ q) * b
        q = q / np.linalg.norm(q)
        basis.append(q)
        active[j] = False
        w[active] -= np.outer(w[active] @ q, q)
    if not basis:
        return np.zeros((0, n))
    return np.vstack(basis)


@dataclass(frozen=True, eq=False)
class Submodule:
    """Submodule generated by the row space of an orthonormal ``basis``.

    ``basis`` is ``r x n`` with orthonormal rows; ``r`` may be zero. Use
    :func:`from_rows` to build one from arbitrary generators.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] < 1:
            raise ShapeError(f"basis must be r x n with n >= 1, got shape {b.shape}")
        gram = b @ b.T
        if np.max(np.abs(gram - np.eye(b.shape[0])), initial=0.0) > 1e-10:
            raise ArgumentError("basis rows are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @property
    def r(self) -> int:
        return self.basis.shape[0]

    dim = r

    @classmethod
    def full(cls, n: int) -> "Submodule":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Submodule":
        return cls(np.zeros((0, n)))

    @classmethod
    def mean(cls, n: int) -> "Submodule":
        """Arrays with identical columns: generated by the all-ones row."""
        return cls(np.full((1, n), 1.0 / np.sqrt(n)))

    @property
    def projector(self) -> np.ndarray:
        return projector(self)

    def contains(self, other: "Submodule", tol: float = SAME_TOL) -> bool:
        """True when ``other`` is a submodule of ``self``."""
        if other.n != self.n:
            return False
        p_self, p_other = projector(self), projector(other)
        return bool(np.max(np.abs(p_other @ p_self - p_other), initial=0.0) <= tol)

    def same_as(self, other: "Submodule", tol: float = SAME_TOL) -> bool:
        if other.n != self.n:
            return False
        return bool(np.max(np.abs(projector(self) - projector(other))) <= tol)

    def __repr__(self):
        return f"Submodule(n={self.n}, r={self.r})"


def from_rows(rows, n: int | None = None) -> Submodule:
    """Submodule generated by a (possibly dependent) list of n-rows.

    ``n`` is needed only when ``rows`` is empty.
    """
    w = np.array(rows, dtype=float)
    if w.size == 0:
        if n is None:
            n = w.shape[-1] if w.ndim == 2 else 0
        if n < 1:
            raise ShapeError("ambient row length must be positive")
        return Submodule.zero(n)
    if w.ndim == 1:
        w = w[np.newaxis, :]
    if w.shape[1] < 1:
        raise ShapeError("ambient row length must be positive")
    if n is not None and w.shape[1] != n:
        raise ShapeError(f"rows have length {w.shape[1]}, expected {n}")
    if not np.all(np.isfinite(w)):
        raise ShapeError("rows have non-finite entries")
    return Submodule(orthonormalize(w))


def projector(l: Submodule) -> np.ndarray:
    """Orthogonal projector ``B^T B`` onto the generating row space."""
    p = l.basis.T @ l.basis
    return (p + p.T) / 2


def project(x: Array, l: Submodule) -> Array:
    """Projection of ``x`` onto ``l``; right multiplication by the projector."""
    if x.n != l.n:
        raise ShapeError(f"array has n={x.n}, submodule ambient is {l.n}")
    return Array(x.data @ projector(l))


def complement(l: Submodule) -> Submodule:
    """Orthogonal complement of ``l`` in the full array space."""
    residual = np.eye(l.n) - projector(l)
    return Submodule(orthonormalize(residual, scale=1.0))


def complement_within(l: Submodule, l1: Submodule) -> Submodule:
    """Orthogonal complement of ``l1`` relative to ``l`` (requires ``l1`` in ``l``)."""
    if l.n != l1.n:
        raise ShapeError("submodules live in different ambient spaces")
    if not l.contains(l1):
        raise ArgumentError("l1 is not contained in l")
    if l.r == 0:
        return Submodule.zero(l.n)
    rows = l.basis - l.basis @ projector(l1)
    return Submodule(orthonormalize(rows, scale=1.0))


@dataclass(frozen=True, eq=False)
class Coordinates:
    """p-column coordinates of an array relative to a row basis.

    ``alphas`` is ``p x k`` (column ``i`` is ``alpha_i``) and ``basis`` is the
    ``k x n`` matrix of basis rows, so the array is ``alphas @ basis``.
    """

    alphas: np.ndarray
    basis: np.ndarray

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.alphas[:, i] for i in range(self.alphas.shape[1])]

    def reconstruct(self) -> Array:
        return Array(self.alphas @ self.basis)


def _invertible(e, name: str) -> np.ndarray:
    e = as_square(e, name)
    cond = np.linalg.cond(e)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise InvertibilityError(f"{name} is singular or ill-conditioned (cond={cond:.3g})")
    return e


def coordinates(x: Array, e_basis) -> Coordinates:
    """Solve ``A E = X`` for the coordinates ``A`` of ``x`` in the basis ``E``.

    Rows of ``e_basis`` are the basis n-rows. The canonical basis returns the
    columns of ``x`` themselves.
    """
    e = _invertible(e_basis, "e_basis")
    if e.shape[0] != x.n:
        raise ShapeError(f"basis is {e.shape}, array has n={x.n}")
    a = np.linalg.solve(e.T, x.data.T).T
    return Coordinates(a, e)


def basis_transform(e_basis, f_basis) -> np.ndarray:
    """The matrix ``T = E F^-1`` mapping coordinates in ``E`` to coordinates in ``F``."""
    e = _invertible(e_basis, "e_basis")
    f = _invertible(f_basis, "f_basis")
    if e.shape != f.shape:
        raise ShapeError("bases have different sizes")
    return np.linalg.solve(f.T, e.T).T


def change_basis(c: Coordinates, e_basis, f_basis) -> Coordinates:
    """Re-express coordinates given in basis ``E`` in basis ``F``: ``B = A E F^-1``."""
    t = basis_transform(e_basis, f_basis)
    if c.alphas.shape[1] != t.shape[0]:
        raise ShapeError("coordinates do not match the basis size")
    return Coordinates(c.alphas @ t, np.asarray(f_basis, dtype=float))
