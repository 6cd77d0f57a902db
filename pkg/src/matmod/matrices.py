"""Small dense-matrix helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .errors import DefinitenessError, ShapeError


def psd_tolerance(a: np.ndarray) -> float:
    """Relative tolerance used for symmetry and semidefiniteness checks."""
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    return 1e-9 * (1.0 + scale)


def as_square(a, name: str = "matrix", size: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    if size is not None and a.shape[0] != size:
        raise ShapeError(f"{name} must be {size}x{size}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError(f"{name} has non-finite entries")
    return a


def is_symmetric(a: np.ndarray, tol: float | None = None) -> bool:
    tol = psd_tolerance(a) if tol is None else tol
    return bool(np.max(np.abs(a - a.T), initial=0.0) <= tol)


def is_psd(a: np.ndarray, tol: float | None = None) -> bool:
    """Symmetric with smallest eigenvalue >= -tol."""
    tol = psd_tolerance(a) if tol is None else tol
    if not is_symmetric(a, tol):
        return False
    if a.size == 0:
        return True
    return bool(np.linalg.eigvalsh((a + a.T) / 2)[0] >= -tol)


def sqrt_spd(s) -> np.ndarray:
    """Symmetric square root of a symmetric positive semidefinite matrix.

    Returns the unique symmetric PSD ``Z`` with ``Z @ Z == s``, computed from
    the symmetric eigendecomposition. Eigenvalues in ``[-tol, 0)`` are
    treated as zero.
    """
    s = as_square(s, "s")
    tol = psd_tolerance(s)
    if not is_symmetric(s, tol):
        raise DefinitenessError("matrix is not symmetric")
    w, v = np.linalg.eigh((s + s.T) / 2)
    if w.size and w[0] < -tol:
        raise DefinitenessError(f"matrix is indefinite (smallest eigenvalue {w[0]:.3g})")
    z = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return (z + z.T) / 2


def check_spd(s, name: str = "sigma") -> np.ndarray:
    """Validate a symmetric positive-definite matrix and return it as floats."""
    s = as_square(s, name)
    if np.max(np.abs(s - s.T), initial=0.0) > 1e-10 * (1.0 + np.max(np.abs(s))):
        raise DefinitenessError(f"{name} is not symmetric")
    try:
        np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        raise DefinitenessError(f"{name} is not positive definite") from None
    return s


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal ``n x n`` matrix."""
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))
