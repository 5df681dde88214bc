import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mazurlab.matcore import AlgebraShape, Element, Rng

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return Rng(12345)


def mat(rows):
    return Element.from_matrix(np.array(rows, dtype=complex))


def shapes():
    return [AlgebraShape.single(1), AlgebraShape.single(4),
            AlgebraShape.of((3, 2), (0.5, 1.5))]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
