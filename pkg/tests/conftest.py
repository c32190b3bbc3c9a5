import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hinfmatch import LensParams, ProblemInstance  # noqa: E402

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example():
    return ProblemInstance.sqrt2_example()


@pytest.fixture
def lens_sqrt2():
    return LensParams.from_gamma(SQRT2)


def random_disc(rng, n, rmax=1.0):
    return rmax * np.sqrt(rng.uniform(0, 1, n)) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


ACCEPTANCE = []


def record_criterion(label, ok, detail):
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
