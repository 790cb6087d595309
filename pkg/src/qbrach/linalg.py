"""Small dense complex linear algebra.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
Hermitian eigenproblems are solved with cyclic complex Jacobi rotations,
which are accurate and simple at the dimensions this package targets
(a few dozen at most).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .config import TOLERANCES
from .exceptions import ConvergenceError, DimensionError, NotHermitianError

ComplexVector = npt.NDArray[np.complex128]
ComplexMatrix = npt.NDArray[np.complex128]

__all__ = [
    "ComplexVector",
    "ComplexMatrix",
    "EigenSystem",
    "as_vector",
    "as_matrix",
    "check_hermitian",
    "inner_product",
    "hermitian_eigensystem",
    "matrix_exponential_action",
]


def as_vector(x) -> ComplexVector:
    """Coerce ``x`` to a finite, non-empty 1-D complex array."""
    v = np.array(x, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def as_matrix(a) -> ComplexMatrix:
    """Coerce ``a`` to a finite square complex array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def check_hermitian(a, rtol: float = TOLERANCES.hermitian_rtol) -> ComplexMatrix:
    """Return ``a`` as a complex matrix, raising if it is not Hermitian."""
    m = as_matrix(a)
    defect = np.linalg.norm(m - m.conj().T)
    if defect > rtol * max(1.0, np.linalg.norm(m)):
        raise NotHermitianError(f"||A - A^H||_F = {defect:.3e} exceeds tolerance")
    return m


def inner_product(a, b) -> complex:
    """Return <a|b>, conjugate-linear in ``a``."""
    a = as_vector(a)
    b = as_vector(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


@dataclass(frozen=True)
class EigenSystem:
    """Eigen-decomposition of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues in ascending order.
        eigenvectors: Unitary matrix whose columns are the matching
            orthonormal eigenvectors.
    """

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def spread(self) -> float:
        """Largest minus smallest eigenvalue."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def phase_action(self, s, v) -> ComplexVector:
        """Apply exp(i s A) to ``v``.

        ``s`` may be a scalar or a 1-D array; in the latter case the result
        has shape ``(len(s), dim)``, one row per value of ``s``.
        """
        coeffs = self.eigenvectors.conj().T @ v
        s = np.asarray(s, dtype=np.float64)
        phases = np.exp(1j * np.multiply.outer(s, self.eigenvalues))
        return (phases * coeffs) @ self.eigenvectors.T


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eigensystem(a, max_sweeps: int = TOLERANCES.jacobi_max_sweeps) -> EigenSystem:
    """Diagonalise a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary and then annihilates the now-real pivot with a real
    plane rotation.

    Raises:
        NotHermitianError: if ``a`` is not Hermitian within tolerance.
        ConvergenceError: if the off-diagonal mass does not vanish within
            ``max_sweeps`` sweeps.
    """
    a = check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    target = n * np.finfo(float).eps * max(scale, np.finfo(float).tiny)

    for _ in range(max_sweeps):
        if _off_diagonal_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= target * 1e-3:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * r)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(zeta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
    else:
        if _off_diagonal_norm(a) > target:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return EigenSystem(eigenvalues=w[order], eigenvectors=v[:, order])


def matrix_exponential_action(a, s: float, v) -> ComplexVector:
    """Return exp(i s A) v for Hermitian ``A``, via its eigensystem."""
    v = as_vector(v)
    eig = hermitian_eigensystem(a)
    if v.size != eig.dim:
        raise DimensionError(f"dimension mismatch: matrix {eig.dim} vs vector {v.size}")
    return eig.phase_action(float(s), v)
