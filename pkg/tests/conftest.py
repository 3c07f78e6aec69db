import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def unit_vectors(draw, dim):
    re = draw(st.lists(st.floats(-1, 1), min_size=dim, max_size=dim))
    im = draw(st.lists(st.floats(-1, 1), min_size=dim, max_size=dim))
    vec = np.array(re) + 1j * np.array(im)
    norm = np.linalg.norm(vec)
    if norm < 1e-3:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    return vec / norm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, n):
    vec = rng.normal(size=4 * n) + 1j * rng.normal(size=4 * n)
    return vec / np.linalg.norm(vec)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = {}


def record_acceptance(number, passed, text):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES, key=str):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
