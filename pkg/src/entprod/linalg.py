"""Dense complex matrix algebra.

Operators are plain ``numpy`` arrays of dtype ``complex128``.  Every function
here is pure: inputs are never modified and no state is shared between calls.
"""
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotHermitianError

HERMITIAN_TOL = 1e-12

#: Schatten index of the operator norm.
INF = math.inf


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square, finite ``complex128`` array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DomainError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


class EigenSystem(NamedTuple):
    """Spectral decomposition ``H = V diag(eigenvalues) V^+``.

    Eigenvalues are ascending; columns of ``eigenvectors`` are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``out[i*db + k, j*db + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors) -> np.ndarray:
    """Left-to-right Kronecker product of a non-empty sequence of matrices."""
    factors = list(factors)
    if not factors:
        raise DomainError("kron_all needs at least one factor")
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_matrix(f))
    return out


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def singular_values(a) -> np.ndarray:
    """Singular values of ``a``, non-negative and sorted descending."""
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def schatten_norm(a, p: float = 2) -> float:
    """Schatten p-norm ``(sum_i s_i**p)**(1/p)`` over the singular values.

    ``p = INF`` (``math.inf``) gives the operator norm, the largest singular
    value.  ``p`` below 1 is not a norm and raises :class:`DomainError`.
    """
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"Schatten index must satisfy p >= 1, got {p}")
    s = singular_values(a)
    if p == INF:
        return float(s[0])
    top = s[0]
    if top == 0.0:
        return 0.0
    # scaling by the top value keeps s**p finite for large p
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def hilbert_schmidt_norm(a) -> float:
    """Schatten 2-norm computed as ``sqrt(Tr(A^+ A))``, without an SVD."""
    m = as_matrix(a)
    return math.sqrt(float(np.vdot(m, m).real))


def hermitian_eig(h) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H^+)/2`` first.  If ``H`` departs from
    Hermiticity by more than ``HERMITIAN_TOL`` in any entry a
    :class:`NotHermitianError` is raised.
    """
    m = as_matrix(h)
    asym = float(np.max(np.abs(m - m.conj().T)))
    if asym > HERMITIAN_TOL:
        raise NotHermitianError(asym, HERMITIAN_TOL)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return EigenSystem(w, v)


def _spectral_function(eig: EigenSystem, values: np.ndarray) -> np.ndarray:
    v = eig.eigenvectors
    return (v * values) @ v.conj().T


def evolve_operator(h, t: float) -> np.ndarray:
    """Real-time evolution operator ``exp(-i h t)`` via the spectral decomposition."""
    eig = h if isinstance(h, EigenSystem) else hermitian_eig(h)
    return _spectral_function(eig, np.exp(-1j * eig.eigenvalues * t))


def imaginary_time_operator(h, beta: float) -> np.ndarray:
    """``exp(-beta h)``, the evolution operator at imaginary time ``-i beta``.

    Only ``beta >= 0`` is supported.
    """
    if not beta >= 0:
        raise DomainError(f"inverse temperature must be >= 0, got {beta}")
    eig = h if isinstance(h, EigenSystem) else hermitian_eig(h)
    out = _spectral_function(eig, np.exp(-beta * eig.eigenvalues))
    return 0.5 * (out + out.conj().T)
