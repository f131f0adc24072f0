import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from metroci.model import CallableModel, OutcomeSpace, ParameterInterval  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def affine_model(slope=1.0, a=-1.0, b=1.0, lo=-0.5, hi=0.5):
    """f(phi) = slope * phi with two outcomes {a, b}; curvature L = 0."""
    def probs(phi):
        m = slope * phi
        q = (m - a) / (b - a)
        return np.array([1 - q, q])
    return CallableModel(ParameterInterval(lo, hi), OutcomeSpace(a, b, (a, b)),
                         f=lambda p: slope * p, df=lambda p: slope, d2f=lambda p: 0.0,
                         probabilities=probs, name="affine")


def bernoulli_model(f, df, d2f, lo, hi):
    """Two-outcome (+-1) model with expectation f."""
    return CallableModel(ParameterInterval(lo, hi), OutcomeSpace(-1, 1, (-1, 1)),
                         f=f, df=df, d2f=d2f,
                         probabilities=lambda p: np.array([(1 - f(p)) / 2, (1 + f(p)) / 2]))


@pytest.fixture
def affine():
    return affine_model()


@pytest.fixture
def sine_full_period():
    return bernoulli_model(math.sin, math.cos, lambda p: -math.sin(p), 0.0, 2 * math.pi)


ACCEPTANCE = {}


def record(criterion, passed, detail):
    """Remember an acceptance verdict; printed once at the end of the run."""
    ACCEPTANCE[criterion] = (bool(passed), detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} {detail}")
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=int):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
