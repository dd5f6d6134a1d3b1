"""Dense complex-matrix kernel used by every other module.

Hermitian eigendecompositions, spectral matrix functions, Kronecker
products and ancilla partial traces. All routines are pure functions of
ndarray inputs and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, DomainError, NotHermitian, NotSquare

# Kernel accuracy target; downstream identities are checked at 1e-8, so
# 1e-10 here leaves two orders of headroom.
HERMITICITY_TOL = 1e-10


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex ndarray, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NotSquare(f"expected a matrix, got array of ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermiticity_deviation(m: np.ndarray) -> float:
    """Max-abs deviation of m from its own adjoint."""
    return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Column k of ``eigenvectors`` belongs to ``eigenvalues[k]``. Within a
    degenerate cluster the basis is an internal detail; nothing downstream
    may depend on it.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> np.ndarray:
        """V diag(lambda) V^dag."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def unitarity_deviation(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.dim))))


def hermitian_eig(m) -> SpectralDecomposition:
    """Decompose a Hermitian matrix, eigenvalues sorted ascending.

    The input is symmetrized ((m + m^dag)/2) before the solve to suppress
    round-off; a deviation beyond HERMITICITY_TOL raises NotHermitian.
    """
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    dev = hermiticity_deviation(a)
    if dev > HERMITICITY_TOL:
        raise NotHermitian(
            f"max |m - m^dag| = {dev:.3e} exceeds tolerance {HERMITICITY_TOL:.0e}"
        )
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def matrix_function(d: SpectralDecomposition, f: Callable[[float], float]) -> np.ndarray:
    """V diag(f(lambda)) V^dag for a real scalar function f.

    Raises DomainError if f is undefined or non-finite on any eigenvalue
    (for example log of a rank-deficient matrix).
    """
    with np.errstate(all="ignore"):
        try:
            fw = np.array([float(f(float(w))) for w in d.eigenvalues])
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"scalar function failed on an eigenvalue: {exc}") from exc
    if not np.all(np.isfinite(fw)):
        bad = d.eigenvalues[~np.isfinite(fw)]
        raise DomainError(f"scalar function non-finite on eigenvalue(s) {bad}")
    v = d.eigenvectors
    return (v * fw) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices; dimensions multiply."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace_ancilla(m, d_sys: int, d_anc: int) -> np.ndarray:
    """Trace out the trailing ancilla factor of an operator on sys (x) anc."""
    a = as_complex_matrix(m)
    full = d_sys * d_anc
    if a.shape != (full, full):
        raise DimensionMismatch(
            f"expected a {full}x{full} matrix for d_sys={d_sys}, d_anc={d_anc}, "
            f"got shape {a.shape}"
        )
    return np.einsum("iaja->ij", a.reshape(d_sys, d_anc, d_sys, d_anc))
