"""Numerical tolerances shared across modules."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # relative: ||A - A^H||_F <= hermitian_rtol * max(1, ||A||_F)
    hermitian_rtol: float = 1e-10
    orthonormal_atol: float = 1e-12
    # states closer than this (radians) are treated as the same ray
    parallel_eps: float = 1e-9
    jacobi_max_sweeps: int = 100
    first_passage_grid: int = 2048
    # bisection stops once the bracket is below this fraction of t_max
    first_passage_rtol: float = 1e-9
    arrival_threshold: float = 1.0 - 1e-9


TOLERANCES = Tolerances()
