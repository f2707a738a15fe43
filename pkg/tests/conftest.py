import numpy as np
import pytest

from sensorqubo.model import validate_covariance

TOY_A = [[2.0, 0.1, 1.0], [0.1, 2.0, 0.1], [1.0, 0.1, 2.0]]
TOY_B = [[2.0, 0.5, 1.0], [0.5, 2.0, 0.1], [1.0, 0.1, 2.0]]


def random_pd(rng, n):
    a = rng.normal(size=(n, n))
    return validate_covariance(a @ a.T / n + 0.5 * np.eye(n))


@pytest.fixture
def toy_a():
    return validate_covariance(TOY_A)


@pytest.fixture
def toy_b():
    return validate_covariance(TOY_B)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for name, value in report.user_properties:
        if name == "criterion":
            status = "PASS" if report.passed else "FAIL"
            _CRITERIA.append(f"[{status}] {value}")


_CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("#")[1].split()[0])):
            terminalreporter.write_line(line)
