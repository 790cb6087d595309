import math

import numpy as np
import pytest

from conftest import random_pair
from qbrach.audit import (
    AuditConfig,
    Verdict,
    pinned_spectrum,
    random_constrained_hamiltonian,
    random_unitary,
    run_audit,
)
from qbrach.brachistochrone import SpreadConvention, solve
from qbrach.exceptions import DegeneratePairError

ZERO = np.array([1, 0], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
SMALL = AuditConfig(n_random=60, n_local_steps=40)


def test_random_unitary_is_unitary():
    rng = np.random.default_rng(0)
    for dim in range(1, 7):
        u = random_unitary(dim, rng)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-13)


def test_random_unitary_phases_are_uniform():
    # Haar measure: E[U_00] = 0; an unfixed QR would bias the diagonal
    rng = np.random.default_rng(1)
    mean = np.mean([random_unitary(3, rng)[0, 0] for _ in range(4000)])
    assert abs(mean) < 0.05


def test_dim2_eigenvalues_are_both_pinned():
    h = random_constrained_hamiltonian(2, 2.0, np.random.default_rng(3))
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1, 1], atol=1e-14)


def test_dim4_extremes_are_pinned():
    h = random_constrained_hamiltonian(4, 2.0, np.random.default_rng(4))
    w = np.linalg.eigvalsh(h)
    assert w[0] == pytest.approx(-1, abs=1e-13)
    assert w[-1] == pytest.approx(1, abs=1e-13)


def test_generation_is_deterministic():
    a = random_constrained_hamiltonian(5, 1.7, np.random.default_rng(99))
    b = random_constrained_hamiltonian(5, 1.7, np.random.default_rng(99))
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
def test_pinned_spread_invariant(dim):
    rng = np.random.default_rng(dim)
    for _ in range(100):
        spread = rng.uniform(0.1, 5)
        w = np.linalg.eigvalsh(random_constrained_hamiltonian(dim, spread, rng))
        assert w[-1] - w[0] == pytest.approx(spread, abs=1e-12)


def test_pinned_spectrum_is_sorted_and_bounded():
    lam = pinned_spectrum(6, 3.0, np.random.default_rng(0))
    assert lam[0] == -1.5 and lam[-1] == 1.5
    assert np.all(np.diff(lam) >= 0)


def test_random_constrained_hamiltonian_validates():
    with pytest.raises(ValueError):
        random_constrained_hamiltonian(1, 1.0, np.random.default_rng())
    with pytest.raises(ValueError):
        random_constrained_hamiltonian(3, 0.0, np.random.default_rng())


def test_default_audit_on_quarter_turn_confirms_optimality():
    report = run_audit(ZERO, PLUS)
    assert report.verdict is Verdict.OPTIMAL_CONFIRMED
    assert report.n_beaten == 0
    assert report.trials == 700
    assert report.spread == pytest.approx(math.sqrt(2))
    assert report.tau_star == pytest.approx(math.pi / (2 * math.sqrt(2)))


def test_injected_optimal_hamiltonian_is_not_counted():
    sol = solve(ZERO, PLUS)
    cfg = AuditConfig(n_random=0, n_local_steps=0)
    report = run_audit(ZERO, PLUS, cfg=cfg, extra_competitors=[sol.hamiltonian])
    assert report.n_arrived == 1 and report.trials == 1
    assert report.best_competitor_time == pytest.approx(report.reference_time, abs=1e-6)
    assert report.n_beaten == 0
    assert report.verdict is Verdict.OPTIMAL_CONFIRMED


def test_injected_optimal_hamiltonian_at_tight_threshold_matches_tau_star():
    sol = solve(ZERO, PLUS)
    cfg = AuditConfig(n_random=0, n_local_steps=0, threshold=1 - 1e-15)
    report = run_audit(ZERO, PLUS, cfg=cfg, extra_competitors=[sol.hamiltonian])
    assert report.best_competitor_time == pytest.approx(report.tau_star, abs=1e-6)


def test_empty_audit_is_vacuously_confirmed():
    report = run_audit(ZERO, PLUS, cfg=AuditConfig(n_random=0, n_local_steps=0))
    assert report.trials == 0
    assert report.n_arrived == 0
    assert report.best_competitor_time is None
    assert report.verdict is Verdict.OPTIMAL_CONFIRMED


def test_audit_is_deterministic(rng):
    psi_i, psi_f = random_pair(rng, 3)
    assert run_audit(psi_i, psi_f, cfg=SMALL) == run_audit(psi_i, psi_f, cfg=SMALL)


def test_different_seeds_give_different_races(rng):
    psi_i, psi_f = random_pair(rng, 2)
    a = run_audit(psi_i, psi_f, cfg=AuditConfig(n_random=60, n_local_steps=40, threshold=0.99))
    b = run_audit(psi_i, psi_f, cfg=AuditConfig(n_random=60, n_local_steps=40, threshold=0.99, seed=7))
    assert a.n_arrived and b.n_arrived
    assert a.best_competitor_time != b.best_competitor_time


def test_hill_climb_best_is_monotone(rng):
    for dim in (2, 3):
        report = run_audit(*random_pair(rng, dim), cfg=SMALL)
        history = np.array(report.climb_history)
        assert len(history) == SMALL.n_local_steps
        # inf (not yet arrived) may only precede finite entries
        finite = np.isfinite(history)
        assert np.all(np.diff(finite.astype(int)) >= 0)
        assert np.all(np.diff(history[finite]) <= 0)


@pytest.mark.parametrize("convention", list(SpreadConvention))
def test_spread_matches_convention(convention, rng):
    psi_i, psi_f = random_pair(rng, 3)
    sol = solve(psi_i, psi_f, omega=0.8, convention=convention)
    report = run_audit(psi_i, psi_f, 0.8, convention, AuditConfig(n_random=5, n_local_steps=0))
    assert report.spread == pytest.approx(2 * sol.lambda_plus)
    if convention is SpreadConvention.SATURATING:
        assert report.spread == pytest.approx(1.6)


def test_unfair_spread_is_detected_as_violation():
    # doubling the allowed spread lets competitors beat the bound; a loose
    # threshold makes arrivals common enough for a short race to see it
    cfg = AuditConfig(n_random=100, n_local_steps=100, spread=2 * math.sqrt(2), threshold=0.99)
    report = run_audit(ZERO, PLUS, cfg=cfg)
    assert report.verdict is Verdict.VIOLATION_FOUND
    assert report.n_beaten > 0
    assert report.best_competitor_time < report.tau_star


def test_loose_threshold_audit_has_arrivals_but_no_violation():
    cfg = AuditConfig(n_random=200, n_local_steps=100, threshold=0.99)
    report = run_audit(ZERO, PLUS, cfg=cfg)
    assert report.n_arrived > 50
    assert report.n_beaten == 0
    assert report.gap_min >= -1e-4


@pytest.mark.parametrize("dim", [2, 3])
def test_small_audit_finds_no_violation(dim):
    rng = np.random.default_rng(100 + dim)
    for _ in range(3):
        report = run_audit(*random_pair(rng, dim), cfg=SMALL)
        assert report.n_beaten == 0
        if report.gap_min is not None:
            assert report.gap_min >= -1e-4


def test_degenerate_pair_rejected():
    with pytest.raises(DegeneratePairError):
        run_audit(ZERO, -ZERO)


@pytest.mark.parametrize(
    "kwargs",
    [{"n_random": -1}, {"t_max_factor": 1.0}, {"threshold": 0.0}, {"spread": -1.0}, {"seed": -3}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        AuditConfig(**kwargs)
