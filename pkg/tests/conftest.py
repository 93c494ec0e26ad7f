from fractions import Fraction

import pytest

from abelcert.lemmas import fixed_point_levels
from abelcert.morphism import UniformCyclicMorphism
from abelcert.pipeline import PipelineConfig, run_verify_paper
from abelcert.scanner import ScanConfig, scan

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def f():
    return UniformCyclicMorphism.default()


@pytest.fixture(scope="session")
def levels(f):
    """``[f^5(0), f^4(0), ..., f^0(0)]``."""
    return fixed_point_levels(f, 5)


@pytest.fixture(scope="session")
def f4(levels):
    return levels[1]


@pytest.fixture(scope="session")
def f5(levels):
    return levels[0]


@pytest.fixture(scope="session")
def f5_scan(f5):
    return scan(f5, ScanConfig(cap=1000, threshold=Fraction(1713, 1000)))


@pytest.fixture(scope="session")
def default_certificates():
    """verify-paper under default settings, keyed by worker count."""
    return {w: run_verify_paper(PipelineConfig(workers=w)) for w in (1, 2, 8)}


@pytest.fixture
def acceptance():
    def record(number: int, passed: bool, text: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
