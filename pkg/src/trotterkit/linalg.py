"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; every public
function validates its inputs through :func:`as_matrix` so that shapes and
finiteness are checked once at the boundary.
"""

from __future__ import annotations

import math

import numpy as np

#: Default spectral-norm distance used for matrix equality across the package.
DEFAULT_ATOL = 1e-10

_TAYLOR_SCALE_TARGET = 0.5
_TAYLOR_TERM_TOL = 1e-16
_TAYLOR_MAX_TERMS = 40


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square, finite ``complex128`` array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return a @ b - b @ a


def spectral_norm(a) -> float:
    """Largest singular value of ``a``."""
    return float(np.linalg.norm(as_matrix(a), 2))


def distance(a, b) -> float:
    """Spectral-norm distance ``||a - b||``."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return spectral_norm(a - b)


def allclose(a, b, atol: float = DEFAULT_ATOL) -> bool:
    return distance(a, b) <= atol


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    The input is scaled by ``2**-s`` until a cheap upper bound on its
    spectral norm is at most 0.5, the series is summed until the next term
    drops below 1e-16 in norm, and the result is squared ``s`` times.
    """
    a = as_matrix(a)
    dim = a.shape[0]
    # max(1-norm, inf-norm) bounds the spectral norm from above
    bound = max(np.abs(a).sum(axis=0).max(), np.abs(a).sum(axis=1).max())
    squarings = 0
    if bound > _TAYLOR_SCALE_TARGET:
        squarings = math.ceil(math.log2(bound / _TAYLOR_SCALE_TARGET))
    if squarings > 1000:
        raise OverflowError(
            f"expm: norm bound {bound:.3e} needs {squarings} squarings; result would overflow"
        )
    scaled = a / 2.0**squarings

    result = identity(dim)
    term = identity(dim)
    for n in range(1, _TAYLOR_MAX_TERMS + 1):
        term = term @ scaled / n
        result += term
        if np.abs(term).max() < _TAYLOR_TERM_TOL:
            break

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise OverflowError(
            f"expm: overflow after {squarings} squarings (norm bound {bound:.3e})"
        )
    return result


def matrix_power(a, m: int) -> np.ndarray:
    """``a`` multiplied by itself ``m`` times, by repeated squaring."""
    a = as_matrix(a)
    if m < 0:
        raise ValueError(f"matrix_power needs m >= 0, got {m}")
    result = identity(a.shape[0])
    base = a
    with np.errstate(over="ignore", invalid="ignore"):
        while m:
            if m & 1:
                result = result @ base
            m >>= 1
            if m:
                base = base @ base
    if not np.all(np.isfinite(result)):
        raise OverflowError("matrix_power: result overflowed")
    return result
