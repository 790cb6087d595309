"""Geometry of pure states: Fubini-Study distance and the two-plane decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOLERANCES
from .exceptions import DegeneratePairError, DimensionError, NormalizationError
from .linalg import ComplexVector, as_vector

__all__ = [
    "CANONICAL_PHI",
    "PlaneDecomposition",
    "as_state",
    "normalize",
    "fidelity",
    "infidelity",
    "fs_distance",
    "decompose_plane",
]

# Phase of the antipodal state chosen so that exp(i(phi + pi/2)) == 1.
CANONICAL_PHI = 1.5 * math.pi

# Below this overlap magnitude the pair is treated as orthogonal and the
# alignment phase is taken from the largest component instead.
_ORTHOGONAL_OVERLAP = 1e-14


def normalize(x) -> ComplexVector:
    v = as_vector(x)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise NormalizationError("cannot normalize the zero vector")
    return v / norm


def as_state(x, atol: float = TOLERANCES.orthonormal_atol) -> ComplexVector:
    """Validate ``x`` as a unit-norm state vector and return it as an array."""
    v = as_vector(x)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > atol:
        raise NormalizationError(f"state norm {norm!r} differs from 1 by more than {atol}")
    return v


def _check_pair(a, b):
    a = as_vector(a)
    b = as_vector(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.size} vs {b.size}")
    return a, b


def fidelity(a, b) -> float:
    """|<a|b>|^2 for unit vectors."""
    a, b = _check_pair(a, b)
    return float(abs(np.vdot(a, b)) ** 2)


def infidelity(target, psi) -> float:
    """1 - |<target|psi>|^2, computed from the orthogonal residual.

    Unlike ``1 - fidelity`` this keeps full relative precision when the
    states nearly coincide.
    """
    target, psi = _check_pair(target, psi)
    residual = psi - np.vdot(target, psi) * target
    return float(np.vdot(residual, residual).real / np.vdot(psi, psi).real)


def fs_distance(a, b) -> float:
    """Fubini-Study angle 2*arccos|<a|b>| between the rays of ``a`` and ``b``.

    Evaluated as ``2*atan2(|b_perp|, |<a|b>|)``, which equals the arccos form
    for unit vectors but does not lose precision for nearby states.
    """
    a, b = _check_pair(a, b)
    overlap = np.vdot(a, b)
    perp = np.linalg.norm(b - overlap * a)
    return 2.0 * math.atan2(perp, abs(overlap))


@dataclass(frozen=True)
class PlaneDecomposition:
    """The final state written over the initial state and its antipode.

    ``psi_f_aligned = cos(theta/2) psi_i + exp(i(phi + pi/2)) sin(theta/2) psi_bar``
    with ``psi_bar`` orthogonal to ``psi_i`` inside span{psi_i, psi_f}.
    """

    psi_i: ComplexVector
    psi_f_aligned: ComplexVector
    psi_bar: ComplexVector
    theta: float
    phi: float = CANONICAL_PHI

    @property
    def dim(self) -> int:
        return self.psi_i.size

    @property
    def cos_half(self) -> float:
        return math.cos(0.5 * self.theta)

    @property
    def sin_half(self) -> float:
        return math.sin(0.5 * self.theta)

    def reassemble(self) -> ComplexVector:
        """Rebuild the aligned final state from (theta, phi, psi_i, psi_bar)."""
        phase = np.exp(1j * (self.phi + 0.5 * math.pi))
        return self.cos_half * self.psi_i + phase * self.sin_half * self.psi_bar

    def plane_projector(self) -> np.ndarray:
        basis = np.column_stack([self.psi_i, self.psi_bar])
        return basis @ basis.conj().T


def _align_orthogonal(psi_f: ComplexVector) -> ComplexVector:
    k = int(np.argmax(np.abs(psi_f)))
    return psi_f * (abs(psi_f[k]) / psi_f[k])


def decompose_plane(psi_i, psi_f, eps: float = TOLERANCES.parallel_eps) -> PlaneDecomposition:
    """Split ``psi_f`` over ``psi_i`` and the orthogonal state in their span.

    The global phase of ``psi_f`` is fixed so that ``<psi_i|psi_f>`` is real
    and non-negative; for orthogonal pairs the largest-magnitude component of
    ``psi_f`` is made real positive instead.

    Raises:
        DegeneratePairError: if the states are closer than ``eps`` radians.
    """
    psi_i = as_state(psi_i)
    psi_f = as_state(psi_f)
    if psi_i.shape != psi_f.shape:
        raise DimensionError(f"dimension mismatch: {psi_i.size} vs {psi_f.size}")

    overlap = np.vdot(psi_i, psi_f)
    if abs(overlap) > _ORTHOGONAL_OVERLAP:
        aligned = psi_f * (abs(overlap) / overlap)
    else:
        aligned = _align_orthogonal(psi_f)

    perp = aligned - np.vdot(psi_i, aligned) * psi_i
    perp -= np.vdot(psi_i, perp) * psi_i
    sin_part = np.linalg.norm(perp)
    theta = 2.0 * math.atan2(sin_part, abs(overlap))
    if theta <= eps:
        raise DegeneratePairError(f"states lie on the same ray (theta = {theta:.3e})")

    return PlaneDecomposition(
        psi_i=psi_i,
        psi_f_aligned=aligned,
        psi_bar=perp / sin_part,
        theta=theta,
    )
