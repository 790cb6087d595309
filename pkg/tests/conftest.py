import numpy as np
import pytest

ACCEPTANCE_RESULTS = []


def random_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pair(rng, dim):
    return random_state(rng, dim), random_state(rng, dim)


def random_hermitian(rng, dim, scale=1.0):
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (x + x.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def record_criterion():
    """Record one acceptance line; the terminal summary prints them all."""

    def record(number, name, passed, detail):
        ACCEPTANCE_RESULTS.append((number, name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{number:02d} {name}: {detail}")
