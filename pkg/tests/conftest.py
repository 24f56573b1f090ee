from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from pmdweak.jones import Axis

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_NAMES = ["single_pmd", "pmd_polarizer", "pmd_pdl", "three_trunk", "five_trunk", "amplification"]

_ACCEPTANCE_LINES = []


def random_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_axis(rng):
    v = rng.normal(size=3)
    return Axis.from_vector(v / np.linalg.norm(v))


angles = st.floats(0.0, np.pi)
phases = st.floats(-np.pi, np.pi)
axes = st.builds(Axis.from_angles, angles, phases)


@st.composite
def states(draw):
    theta, phi, g = draw(angles), draw(phases), draw(phases)
    return np.exp(1j * g) * np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_report():
    def report(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
