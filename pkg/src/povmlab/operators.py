"""Dense complex-matrix foundation.

Operators are plain numpy arrays of complex128.  This module provides the
pieces everything else is built from: Hermitian eigendecomposition with a
reconstruction guarantee, functional calculus f(H) = V f(lam) V*, the
effect/projection classification, and the Hilbert-Schmidt inner product
tr(B* A).
"""

from dataclasses import dataclass

import numpy as np

# Relative tolerance used by every predicate unless the caller overrides it.
DEFAULT_TOL = 1e-10

NOT_EFFECT = "not_effect"
EFFECT = "effect"
PROJECTION = "projection"


def as_operator(A) -> np.ndarray:
    """Coerce to a complex matrix and reject non-finite entries."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"operator must be a 2-d array, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError("operator has non-finite entries")
    return A


def require_square(A: np.ndarray) -> np.ndarray:
    A = as_operator(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"square operator required, got shape {A.shape}")
    return A


def opnorm(A) -> float:
    """Operator norm (largest singular value)."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def adjoint(A) -> np.ndarray:
    return np.conj(np.asarray(A)).T


def is_hermitian(A, tol: float = DEFAULT_TOL) -> bool:
    A = require_square(A)
    return opnorm(A - adjoint(A)) <= tol * max(1.0, opnorm(A))


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigendecomposition of a Hermitian operator.

    ``eigenvalues`` are real ascending, columns of ``eigenvectors`` the
    corresponding orthonormal eigenbasis.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ adjoint(V)

    def projection(self, mask) -> np.ndarray:
        """Spectral projection onto the eigenvalues selected by ``mask``."""
        V = self.eigenvectors[:, np.asarray(mask, dtype=bool)]
        return V @ adjoint(V)


def herm_spectrum(H, tol: float = DEFAULT_TOL) -> HermitianSpectrum:
    """Eigendecomposition of H, which must be Hermitian within tol.

    H is symmetrised to (H + H*)/2 before decomposition so the result is
    exactly real-spectral.
    """
    H = require_square(H)
    if not is_hermitian(H, tol):
        raise ValueError("operator is not Hermitian within tolerance "
                         f"(defect {opnorm(H - adjoint(H)):.3e})")
    Hs = (H + adjoint(H)) / 2.0
    lam, V = np.linalg.eigh(Hs)
    return HermitianSpectrum(eigenvalues=lam, eigenvectors=V)


def funcalc(H, f, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian functional calculus: return V f(lam) V*.

    ``f`` is applied eigenvalue-wise; a value that comes back non-finite
    (or an exception from ``f``) is reported as a domain error naming the
    offending eigenvalue.
    """
    spec = herm_spectrum(H, tol)
    vals = np.empty(len(spec.eigenvalues), dtype=complex)
    for i, lam in enumerate(spec.eigenvalues):
        try:
            with np.errstate(divide="raise", invalid="raise", over="raise"):
                v = f(lam)
        except (ValueError, ZeroDivisionError, OverflowError,
                FloatingPointError) as exc:
            raise ValueError(f"function undefined at eigenvalue {lam!r}: {exc}")
        v = complex(v)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise ValueError(f"function undefined at eigenvalue {lam!r}")
        vals[i] = v
    V = spec.eigenvectors
    out = (V * vals) @ adjoint(V)
    return out


def is_effect(A, tol: float = DEFAULT_TOL) -> str:
    """Classify A as not_effect / effect / projection.

    Effect: Hermitian with spectrum in [-tol, 1+tol].  Projection:
    additionally ||A^2 - A|| <= tol.
    """
    A = require_square(A)
    if not is_hermitian(A, tol):
        return NOT_EFFECT
    lam = herm_spectrum(A, tol).eigenvalues
    if lam.min() < -tol or lam.max() > 1.0 + tol:
        return NOT_EFFECT
    if opnorm(A @ A - A) <= tol:
        return PROJECTION
    return EFFECT


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product tr(B* A)."""
    A = as_operator(A)
    B = as_operator(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    return complex(np.sum(np.conj(B) * A))


def sqrtm_psd(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite operator.

    Eigenvalues in [-tol, 0) are clipped to zero; anything below -tol is a
    genuine negativity and is rejected.
    """
    spec = herm_spectrum(A, tol)
    lam = spec.eigenvalues.copy()
    scale = max(1.0, abs(lam).max())
    if lam.min() < -tol * scale:
        raise ValueError(f"operator not positive (min eigenvalue {lam.min():.3e})")
    lam = np.clip(lam, 0.0, None)
    V = spec.eigenvectors
    return (V * np.sqrt(lam)) @ adjoint(V)


def imag_power(A, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """A^{it} for positive definite A, via the functional calculus."""
    spec = herm_spectrum(A, tol)
    lam = spec.eigenvalues
    if lam.min() <= 0:
        raise ValueError("imaginary powers need a positive definite operator "
                         f"(min eigenvalue {lam.min():.3e})")
    V = spec.eigenvectors
    return (V * np.exp(1j * t * np.log(lam))) @ adjoint(V)
