"""Small dense complex linear algebra helpers.

Everything operates on plain 2-D numpy arrays (complex128). The eigensolver
is restricted to the tiny Hermitian matrices this package produces
(dims <= 8) and fails loudly instead of regularizing its input.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10

# hermitian_eig guards its input size; everything in this package is 2x2..8x8
_MAX_EIG_DIM = 8


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


class NotHermitian(ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NoConvergence(RuntimeError):
    """Eigensolver failed to converge."""


class EigenSystem(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    values : real eigenvalues in ascending order
    vectors : orthonormal eigenvectors as columns; vectors[:, k] pairs
        with values[k]
    """

    values: np.ndarray
    vectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array (no copy when possible)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    return m


def matmul(a, b) -> np.ndarray:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add {a.shape} to {b.shape}")
    return a + b


def scale(c, a) -> np.ndarray:
    return complex(c) * as_complex_matrix(a)


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def trace(a) -> complex:
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"trace needs a square matrix, got {m.shape}")
    return complex(np.trace(m))


def kron(a, b) -> np.ndarray:
    """Kronecker (tensor) product; dims multiply."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def max_abs(a) -> float:
    """Largest entry magnitude (elementwise infinity norm)."""
    return float(np.max(np.abs(np.asarray(a))))


def hermiticity_defect(a) -> float:
    m = as_complex_matrix(a)
    return max_abs(m - m.conj().T)


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(a) <= tol


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a small Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, dims <= 8, Hermitian within `tol`
        (max |a_ij - conj(a_ji)|), all entries finite.
    tol : float
        Hermiticity gate.

    Returns
    -------
    EigenSystem
        Ascending real eigenvalues and orthonormal column eigenvectors.

    Raises
    ------
    NotHermitian
        If the Hermiticity gate fails.
    NoConvergence
        If the underlying iteration does not converge.
    DimensionMismatch
        If the matrix is not square or larger than 8x8.
    """
    m = as_complex_matrix(a)
    n, nc = m.shape
    if n != nc:
        raise DimensionMismatch(f"eigensolver needs a square matrix, got {m.shape}")
    if n > _MAX_EIG_DIM:
        raise DimensionMismatch(f"eigensolver accepts dims <= {_MAX_EIG_DIM}, got {n}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds tolerance {tol:.3e}")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numerically exotic
        raise NoConvergence(str(exc)) from exc
    return EigenSystem(values, vectors)
