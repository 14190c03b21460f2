import math

import pytest
from hypothesis import HealthCheck, settings

from planarcasimir import C, AtomModel, MaterialModel

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# c / omega0 = 100 nm
OMEGA0 = C / 100e-9
ALPHA0 = 1e-39  # C m^2/V, roughly an alkali ground state


@pytest.fixture
def atom():
    return AtomModel.single_oscillator(ALPHA0, OMEGA0)


@pytest.fixture
def dielectric():
    """eps(i xi) = 1 + 3 omega0^2 / (omega0^2 + xi^2), static eps = 4."""
    return MaterialModel.lorentz(4.0, OMEGA0)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def combined(*results):
    return sum(r.abs_error for r in results)


__all__ = ["OMEGA0", "ALPHA0", "rel", "combined", "math", "ACCEPTANCE_LINES"]


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def report():
    def record(n, ok, detail):
        ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[n])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
