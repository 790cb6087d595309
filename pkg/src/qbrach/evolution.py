"""Numerical propagation, trajectory sampling and first-passage detection.

Time-independent Hamiltonians are propagated exactly through their
eigensystem.  A classical fourth-order Runge-Kutta stepper is provided for
time-dependent Hamiltonians and as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .brachistochrone import BrachistochroneSolution, analytic_state, energy_uncertainty
from .config import TOLERANCES
from .exceptions import DimensionError, DomainError
from .geometry import fs_distance
from .linalg import ComplexMatrix, ComplexVector, EigenSystem, as_vector, check_hermitian, hermitian_eigensystem

__all__ = [
    "Propagator",
    "TrajectorySample",
    "FirstPassageResult",
    "propagate",
    "sample_trajectory",
    "sample_analytic_trajectory",
    "first_passage",
    "integrate_rk4",
]


class Propagator:
    """exp(+i H t / hbar) applied to a fixed initial state.

    The eigensystem of ``H`` is computed once; every subsequent evaluation is
    a diagonal phase multiplication.
    """

    def __init__(self, h, psi0, hbar: float = 1.0, eigensystem: Optional[EigenSystem] = None):
        if not hbar > 0:
            raise DomainError(f"hbar must be positive, got {hbar}")
        self.eig = eigensystem if eigensystem is not None else hermitian_eigensystem(h)
        psi0 = as_vector(psi0)
        if psi0.size != self.eig.dim:
            raise DimensionError(f"dimension mismatch: operator {self.eig.dim} vs state {psi0.size}")
        self.hbar = float(hbar)
        self.psi0 = psi0
        self._coeffs = self.eig.eigenvectors.conj().T @ psi0

    @classmethod
    def from_eigensystem(cls, eig: EigenSystem, psi0, hbar: float = 1.0) -> "Propagator":
        return cls(None, psi0, hbar, eigensystem=eig)

    @property
    def spread(self) -> float:
        return self.eig.spread

    def state(self, t):
        """State(s) at time(s) ``t``; array input gives one row per time."""
        t = np.asarray(t, dtype=np.float64)
        phases = np.exp(1j * np.multiply.outer(t / self.hbar, self.eig.eigenvalues))
        return (phases * self._coeffs) @ self.eig.eigenvectors.T

    def infidelity(self, target: ComplexVector, t):
        """1 - |<target|psi(t)>|^2 from the orthogonal residual, vectorized in ``t``."""
        psi = self.state(t)
        overlap = psi @ target.conj()
        residual = psi - np.multiply.outer(overlap, target)
        num = np.sum(np.abs(residual) ** 2, axis=-1)
        den = np.sum(np.abs(psi) ** 2, axis=-1)
        return num / den


def propagate(h, psi0, t: float, hbar: float = 1.0) -> ComplexVector:
    """exp(+i H t / hbar) psi0."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return Propagator(h, psi0, hbar).state(float(t))


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: ComplexVector
    fidelity: float
    delta_h: float
    fs_speed: float


def _samples(
    state_at: Callable[[float], ComplexVector],
    h: ComplexMatrix,
    target: ComplexVector,
    times: np.ndarray,
    step: float,
) -> list[TrajectorySample]:
    out = []
    for t in times:
        psi = state_at(t)
        speed = fs_distance(state_at(t - step), state_at(t + step)) / (2 * step)
        out.append(
            TrajectorySample(
                t=float(t),
                state=psi,
                fidelity=float(abs(np.vdot(target, psi)) ** 2),
                delta_h=energy_uncertainty(h, psi),
                fs_speed=speed,
            )
        )
    return out


def _uniform_times(t_max: float, n_samples: int) -> tuple[np.ndarray, float]:
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples}")
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    return np.linspace(0.0, t_max, n_samples), t_max / (n_samples - 1)


def sample_trajectory(h, psi0, target, t_max: float, n_samples: int, hbar: float = 1.0) -> list[TrajectorySample]:
    """Sample the propagated state at ``n_samples`` uniform times on [0, t_max].

    The Fubini-Study speed is a symmetric finite difference with the sample
    spacing as step (the neighbours at ``-step`` and ``t_max + step`` are
    evaluated where needed).
    """
    h = check_hermitian(h)
    target = as_vector(target)
    prop = Propagator(h, psi0, hbar)
    if target.size != prop.eig.dim:
        raise DimensionError(f"dimension mismatch: operator {prop.eig.dim} vs target {target.size}")
    times, step = _uniform_times(t_max, n_samples)
    return _samples(prop.state, h, target, times, step)


def sample_analytic_trajectory(sol: BrachistochroneSolution, n_samples: int, target=None) -> list[TrajectorySample]:
    """Like :func:`sample_trajectory` but using the closed-form state on [0, tau]."""
    target = sol.decomposition.psi_f_aligned if target is None else as_vector(target)
    times, step = _uniform_times(sol.tau, n_samples)
    return _samples(lambda t: analytic_state(sol, t), sol.hamiltonian, target, times, step)


@dataclass(frozen=True)
class FirstPassageResult:
    """Outcome of a first-passage search.

    When ``found`` is false, ``time`` is None and ``fidelity_at_time`` holds
    the best fidelity seen on the scan.
    """

    found: bool
    time: Optional[float]
    fidelity_at_time: float


def _first_passage(
    prop: Propagator,
    target: ComplexVector,
    t_max: float,
    threshold: float,
    grid_points: int = TOLERANCES.first_passage_grid,
    rtol: float = TOLERANCES.first_passage_rtol,
) -> FirstPassageResult:
    if not 0.0 < threshold <= 1.0:
        raise DomainError(f"threshold must lie in (0, 1], got {threshold}")
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    if target.size != prop.eig.dim:
        raise DimensionError(f"dimension mismatch: operator {prop.eig.dim} vs target {target.size}")
    tol = 1.0 - threshold

    def infid(t):
        return float(prop.infidelity(target, t))

    grid = np.linspace(0.0, t_max, grid_points)
    values = prop.infidelity(target, grid)
    if values[0] <= tol:
        return FirstPassageResult(True, 0.0, 1.0 - float(values[0]))

    # |d^2 F/dt^2| <= (spread/hbar)^2, so inside a cell of width step the
    # infidelity cannot dip more than (spread/hbar)^2 step^2 / 8 below the
    # smaller endpoint value.
    step = grid[1] - grid[0]
    margin = 0.125 * (prop.spread / prop.hbar) ** 2 * step**2
    xatol = rtol * t_max
    best = float(values.min())

    crossed = np.flatnonzero(values[1:] <= tol)
    last = int(crossed[0]) if crossed.size else grid_points - 1
    near = np.minimum(values[:-1], values[1:])[:last] <= tol + margin
    for k in np.flatnonzero(near):
        res = minimize_scalar(
            infid, bounds=(grid[k], grid[k + 1]), method="bounded", options={"xatol": xatol * 1e-3}
        )
        best = min(best, float(res.fun))
        if res.fun <= tol:
            lo, hi = grid[k], float(res.x)
            break
    else:
        if not crossed.size:
            return FirstPassageResult(False, None, 1.0 - best)
        lo, hi = grid[last], grid[last + 1]

    while hi - lo > xatol:
        mid = 0.5 * (lo + hi)
        if infid(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return FirstPassageResult(True, float(hi), 1.0 - infid(hi))


def first_passage(
    h,
    psi0,
    target,
    t_max: float,
    threshold: float = TOLERANCES.arrival_threshold,
    hbar: float = 1.0,
) -> FirstPassageResult:
    """Earliest time in [0, t_max] at which |<target|psi(t)>|^2 >= threshold.

    A uniform scan locates the first grid cell containing a crossing (cells
    whose endpoints are close to the threshold are searched for interior
    dips), then bisection narrows it to ``1e-9 * t_max``.  The returned time
    always satisfies the threshold.
    """
    prop = Propagator(h, psi0, hbar)
    return _first_passage(prop, as_vector(target), t_max, threshold)


def integrate_rk4(
    h_of_t: Callable[[float], ComplexMatrix],
    psi0,
    t: float,
    n_steps: int,
    hbar: float = 1.0,
    t0: float = 0.0,
) -> ComplexVector:
    """Integrate d psi/dt = (i/hbar) H(t) psi with classical RK4 steps."""
    psi = as_vector(psi0)
    dt = (t - t0) / n_steps
    scale = 1j / hbar

    def f(time, y):
        return scale * (h_of_t(time) @ y)

    time = t0
    for _ in range(n_steps):
        k1 = f(time, psi)
        k2 = f(time + 0.5 * dt, psi + 0.5 * dt * k1)
        k3 = f(time + 0.5 * dt, psi + 0.5 * dt * k2)
        k4 = f(time + dt, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        time += dt
    return psi


def rk4_times(
    h_of_t: Callable[[float], ComplexMatrix],
    psi0,
    times: Sequence[float],
    steps_per_unit: int,
    hbar: float = 1.0,
) -> np.ndarray:
    """States at increasing ``times`` by chaining RK4 segments from t = 0."""
    psi = as_vector(psi0)
    out = []
    last = 0.0
    for t in times:
        n = max(1, math.ceil((t - last) * steps_per_unit))
        if t > last:
            psi = integrate_rk4(h_of_t, psi, t, n, hbar, t0=last)
        out.append(psi)
        last = t
    return np.array(out)
