from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DIAMOND = ((0, 1, 0), (1, -1, 1), (0, 1, 0))


@pytest.fixture
def diamond():
    from sympoly.asm import SignMatrix

    return SignMatrix.from_rows(DIAMOND)


def frac(s: str) -> Fraction:
    return Fraction(s)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    from contextlib import contextmanager

    lines = request.config.acceptance_lines

    @contextmanager
    def criterion(number: int, title: str):
        try:
            yield
        except BaseException as e:
            line = f"criterion {number:2d}: FAIL  {title}  ({type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''})"
            lines.append(line)
            print(line)
            raise
        line = f"criterion {number:2d}: PASS  {title}"
        lines.append(line)
        print(line)

    return criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
