"""Time-optimal Hamiltonian for a prescribed pair of pure states.

Given initial and final states and a bound on the eigenvalue spread, the
fastest evolution rotates the Bloch sphere of span{psi_i, psi_f} about the
axis whose equator is the great circle through both states.  This module
builds the axis eigenstates, the Hamiltonian in its projector, expanded
and closed forms, the minimal transit time and the explicit trajectory.

Time evolution follows the ``exp(+i H t / hbar)`` convention throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import AxisError, DimensionError, DomainError
from .geometry import PlaneDecomposition, as_state, decompose_plane
from .linalg import ComplexMatrix, ComplexVector, check_hermitian

__all__ = [
    "SpreadConvention",
    "BrachistochroneSolution",
    "axis_states",
    "hamiltonian_from_axis",
    "expanded_hamiltonian",
    "closed_form_hamiltonian",
    "optimal_hamiltonian",
    "solve",
    "minimal_time",
    "energy_uncertainty",
    "analytic_state",
    "apply_gauge",
]

_SQRT_HALF = math.sqrt(0.5)


class SpreadConvention(str, enum.Enum):
    """How ``omega`` relates to the eigenvalues of the optimal Hamiltonian.

    ``EQ8`` uses ``i omega (|I><F| - |F><I|)`` literally, whose eigenvalues
    are ``+-omega sin(theta/2)``.  ``SATURATING`` rescales by
    ``1/sin(theta/2)`` so the eigenvalues are exactly ``+-omega``.
    """

    EQ8 = "eq8"
    SATURATING = "saturating"


def _outer(a: ComplexVector, b: ComplexVector) -> ComplexMatrix:
    """|a><b|"""
    return np.outer(a, b.conj())


def axis_states(d: PlaneDecomposition) -> tuple[ComplexVector, ComplexVector]:
    """Eigenstates (E+, E-) of the rotation that carries psi_i to psi_f.

    Written directly in terms of the two input states::

        E+- = [(1 +- i cot(theta/2)) psi_i -+ (i / sin(theta/2)) psi_f] / sqrt(2)

    Both lie on the equator of the (psi_i, psi_bar) axis, i.e. have overlap
    probability 1/2 with each input state.
    """
    c, s = d.cos_half, d.sin_half
    psi_i, psi_f = d.psi_i, d.psi_f_aligned
    e_plus = _SQRT_HALF * ((1 + 1j * c / s) * psi_i - (1j / s) * psi_f)
    e_minus = _SQRT_HALF * ((1 - 1j * c / s) * psi_i + (1j / s) * psi_f)
    return e_plus, e_minus


def hamiltonian_from_axis(e_plus, e_minus, lambda_plus: float, lambda_minus: float) -> ComplexMatrix:
    """lambda_+ |E+><E+| + lambda_- |E-><E-|."""
    e_plus = as_state(e_plus, atol=1e-10)
    e_minus = as_state(e_minus, atol=1e-10)
    if e_plus.shape != e_minus.shape:
        raise DimensionError(f"dimension mismatch: {e_plus.size} vs {e_minus.size}")
    if abs(np.vdot(e_plus, e_minus)) > 1e-10:
        raise AxisError("axis states are not orthogonal")
    if lambda_plus == lambda_minus:
        raise AxisError("axis eigenvalues must differ")
    return lambda_plus * _outer(e_plus, e_plus) + lambda_minus * _outer(e_minus, e_minus)


def expanded_hamiltonian(d: PlaneDecomposition, lambda_plus: float, lambda_minus: float) -> ComplexMatrix:
    """The axis Hamiltonian expanded term by term over |psi_i> and |psi_f>.

    Valid for arbitrary (not necessarily opposite) ``lambda_plus`` and
    ``lambda_minus``; equals :func:`hamiltonian_from_axis` applied to
    :func:`axis_states`.
    """
    c, s = d.cos_half, d.sin_half
    psi_i, psi_f = d.psi_i, d.psi_f_aligned
    lp, lm = lambda_plus, lambda_minus
    diag = (lp + lm) / (2 * s**2)
    coef_if = 0.5 * lp * (1j / s - c / s**2) - 0.5 * lm * (1j / s + c / s**2)
    coef_fi = 0.5 * lp * (-1j / s - c / s**2) - 0.5 * lm * (-1j / s + c / s**2)
    return (
        diag * (_outer(psi_i, psi_i) + _outer(psi_f, psi_f))
        + coef_if * _outer(psi_i, psi_f)
        + coef_fi * _outer(psi_f, psi_i)
    )


def closed_form_hamiltonian(d: PlaneDecomposition, xi: float) -> ComplexMatrix:
    """Two-term form for lambda_+- = +-xi/2: i xi/(2 sin) (|I><F| - |F><I|)."""
    k = xi / (2 * d.sin_half)
    return _generator(d, k)


def _generator(d: PlaneDecomposition, kappa: float) -> ComplexMatrix:
    forward = _outer(d.psi_i, d.psi_f_aligned)
    return 1j * kappa * (forward - forward.conj().T)


@dataclass(frozen=True)
class BrachistochroneSolution:
    """Optimal Hamiltonian together with its spectrum, ΔH and transit time."""

    decomposition: PlaneDecomposition
    omega: float
    hbar: float
    convention: SpreadConvention
    hamiltonian: ComplexMatrix
    e_plus: ComplexVector
    e_minus: ComplexVector
    lambda_plus: float
    lambda_minus: float
    delta_h: float
    tau: float

    @property
    def theta(self) -> float:
        return self.decomposition.theta

    @property
    def xi(self) -> float:
        """Eigenvalue gap lambda_+ - lambda_-."""
        return self.lambda_plus - self.lambda_minus

    @property
    def kappa(self) -> float:
        """Coefficient of i(|I><F| - |F><I|) in the Hamiltonian."""
        return _kappa(self.omega, self.decomposition.sin_half, self.convention)

    @property
    def spread(self) -> float:
        return self.xi


def _kappa(omega: float, sin_half: float, convention: SpreadConvention) -> float:
    if SpreadConvention(convention) is SpreadConvention.SATURATING:
        return omega / sin_half
    return omega


def optimal_hamiltonian(
    d: PlaneDecomposition,
    omega: float,
    convention: SpreadConvention = SpreadConvention.EQ8,
    hbar: float = 1.0,
) -> BrachistochroneSolution:
    """Build the time-optimal Hamiltonian i κ (|I><F| - |F><I|) for the pair.

    ``κ = omega`` under ``EQ8`` and ``omega / sin(theta/2)`` under
    ``SATURATING``.  The gauge term is zero.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    convention = SpreadConvention(convention)
    s = d.sin_half
    kappa = _kappa(omega, s, convention)
    half_gap = kappa * s
    e_plus, e_minus = axis_states(d)
    return BrachistochroneSolution(
        decomposition=d,
        omega=float(omega),
        hbar=float(hbar),
        convention=convention,
        hamiltonian=_generator(d, kappa),
        e_plus=e_plus,
        e_minus=e_minus,
        lambda_plus=half_gap,
        lambda_minus=-half_gap,
        delta_h=half_gap,
        tau=minimal_time(d.theta, omega, hbar, convention),
    )


def solve(
    psi_i,
    psi_f,
    omega: float = 1.0,
    convention: SpreadConvention = SpreadConvention.EQ8,
    hbar: float = 1.0,
) -> BrachistochroneSolution:
    """Decompose the pair and build the optimal Hamiltonian in one call."""
    return optimal_hamiltonian(decompose_plane(psi_i, psi_f), omega, convention, hbar)


def minimal_time(
    theta: float,
    omega: float,
    hbar: float = 1.0,
    convention: SpreadConvention = SpreadConvention.EQ8,
) -> float:
    """Shortest time to cover Fubini-Study angle ``theta``.

    ``hbar*theta / (2 omega sin(theta/2))`` under ``EQ8``; the saturating
    convention drops the ``sin(theta/2)``.
    """
    if not 0.0 < theta <= math.pi:
        raise DomainError(f"theta must lie in (0, pi], got {theta}")
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if SpreadConvention(convention) is SpreadConvention.SATURATING:
        return hbar * theta / (2 * omega)
    return hbar * theta / (2 * omega * math.sin(0.5 * theta))


def energy_uncertainty(h, psi) -> float:
    """Standard deviation of ``h`` in state ``psi``."""
    h = check_hermitian(h)
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.size != h.shape[0]:
        raise DimensionError(f"dimension mismatch: operator {h.shape[0]} vs state {psi.size}")
    h_psi = h @ psi
    mean = np.vdot(psi, h_psi).real
    second = np.vdot(h_psi, h_psi).real
    return math.sqrt(max(second - mean**2, 0.0))


def analytic_state(sol: BrachistochroneSolution, t: float) -> ComplexVector:
    """Closed-form state at time ``t`` under the optimal Hamiltonian.

    ``psi(t) = [cos(a) - cot(theta/2) sin(a)] psi_i + sin(a)/sin(theta/2) psi_f``
    with ``a = κ t sin(theta/2) / hbar``.  At ``t = tau`` the coefficient of
    ``psi_i`` vanishes and the state equals the aligned target.
    """
    d = sol.decomposition
    c, s = d.cos_half, d.sin_half
    a = sol.kappa * t * s / sol.hbar
    return (math.cos(a) - c / s * math.sin(a)) * d.psi_i + (math.sin(a) / s) * d.psi_f_aligned


def apply_gauge(sol: BrachistochroneSolution, h_fn: Callable[[float], float]) -> Callable[[float], ComplexMatrix]:
    """Return ``t -> H + h_fn(t) * 1``.

    The identity shift only changes the global phase of the evolving state.
    """
    eye = np.eye(sol.decomposition.dim, dtype=np.complex128)
    h = sol.hamiltonian

    def gauged(t: float) -> ComplexMatrix:
        return h + float(h_fn(t)) * eye

    return gauged
