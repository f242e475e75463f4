import numpy as np
import pytest

from freqsim.simulate import DesignSpec, GenerativeParams


@pytest.fixture
def gibson_wu_design():
    return DesignSpec(40, 16)


@pytest.fixture
def default_params():
    return GenerativeParams()


def binomial_band(p, n, k=3.0):
    """(lo, hi) = p -/+ k binomial standard errors."""
    half = k * np.sqrt(p * (1 - p) / n)
    return p - half, p + half


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line, then assert."""
    def check(number, name, ok, detail=""):
        line = f"acceptance {number:>2} {'PASS' if ok else 'FAIL'}  {name}  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
