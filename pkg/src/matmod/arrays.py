"""Arrays of p-columns and their matrix-valued scalar product.

An array is an ordered row of ``n`` p-columns ``X_1, ..., X_n``. It is stored
as the ``p x n`` matrix whose i-th column is ``X_i``; all operations reduce to
matrix algebra on that form. Arrays form a module over the ring of ``p x p``
matrices: they can be added, multiplied on the left by ``p x p`` matrices and
on the right by ``n x n`` matrices (the linear transformations of the array).

The scalar product of two arrays is the ``p x p`` matrix
``<T, R> = sum_i X_i Y_i^T``, i.e. ``X @ Y.T`` in matrix form. It is not
commutative: ``<R, T> = <T, R>^T``.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import ShapeError
from .matrices import as_square


class Array:
    """A ``p x n`` real array viewed as ``n`` p-columns.

    The underlying data is copied on construction and marked read-only, so
    instances are safe to share.

    Parameters
    ----------
    data : array_like
        ``p x n`` matrix; column ``i`` is the p-column ``X_i``. A 1-d input is
        read as a single row (``p = 1``).
    """

    __slots__ = ("_data",)
    __array_priority__ = 20

    def __init__(self, data):
        a = np.array(data, dtype=float)
        if a.ndim == 1:
            a = a[np.newaxis, :]
        if a.ndim != 2:
            raise ShapeError(f"array data must be 2-d, got {a.ndim}-d")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ShapeError(f"array must have p >= 1 and n >= 1, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ShapeError("array has non-finite entries")
        a.setflags(write=False)
        self._data = a

    @classmethod
    def from_columns(cls, columns: Iterable) -> "Array":
        cols = [np.asarray(c, dtype=float).reshape(-1) for c in columns]
        if not cols:
            raise ShapeError("need at least one column")
        return cls(np.column_stack(cols))

    @classmethod
    def zeros(cls, p: int, n: int) -> "Array":
        return cls(np.zeros((p, n)))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def p(self) -> int:
        return self._data.shape[0]

    @property
    def n(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    def column(self, i: int) -> np.ndarray:
        return self._data[:, i]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self._data[:, i] for i in range(self.n)]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy() if copy else self._data
        return self._data.astype(dtype)

    def __add__(self, other):
        if not isinstance(other, Array):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Array):
            return NotImplemented
        _check_same_shape(self, other)
        return Array(self._data - other._data)

    def __neg__(self):
        return Array(-self._data)

    def __eq__(self, other):
        if not isinstance(other, Array):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self):
        return f"Array(p={self.p}, n={self.n}, data={self._data.tolist()!r})"

    def allclose(self, other: "Array", atol: float = 1e-10, rtol: float = 0.0) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self._data, other._data, atol=atol, rtol=rtol)
        )


def _check_same_shape(a: Array, b: Array) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"array shapes differ: {a.shape} vs {b.shape}")


def as_array(x) -> Array:
    return x if isinstance(x, Array) else Array(x)


def add(a: Array, b: Array) -> Array:
    _check_same_shape(a, b)
    return Array(a.data + b.data)


def left_mul(k, t: Array) -> Array:
    """Multiply every p-column of ``t`` by the ``p x p`` matrix ``k``."""
    k = as_square(k, "k", t.p)
    return Array(k @ t.data)


def right_mul(t: Array, q) -> Array:
    """Apply the linear transformation ``q`` (``n x n``) to ``t``.

    Column ``j`` of the result is ``sum_i q[i, j] X_i``.
    """
    q = as_square(q, "q", t.n)
    return Array(t.data @ q)


def orthogonal_matrix(q, tol: float = 1e-10) -> np.ndarray:
    """Return ``q`` as a float matrix after checking ``q q^T = I`` to ``tol``."""
    q = as_square(q, "q")
    err = np.max(np.abs(q @ q.T - np.eye(q.shape[0])), initial=0.0)
    if err > tol:
        raise ShapeError(f"matrix is not orthogonal (max |QQ^T - I| = {err:.3g})")
    return q


def orthogonal_transform(t: Array, q) -> Array:
    """Right-multiply by an orthogonal matrix, verifying orthogonality first."""
    return right_mul(t, orthogonal_matrix(q))


def scalar_product(a: Array, b: Array) -> np.ndarray:
    """The ``p x p`` matrix ``sum_i X_i Y_i^T``."""
    _check_same_shape(a, b)
    return a.data @ b.data.T


def scalar_square(t: Array) -> np.ndarray:
    s = t.data @ t.data.T
    # exact symmetry; BLAS may differ in the last bit across triangles
    return (s + s.T) / 2


def is_orthogonal(a: Array, b: Array, tol: float = 1e-12) -> bool:
    """True when every entry of ``<a, b>`` is at most ``tol`` in magnitude.

    ``<b, a>`` is the transpose of ``<a, b>``, so the relation is symmetric.
    """
    return bool(np.max(np.abs(scalar_product(a, b))) <= tol)
