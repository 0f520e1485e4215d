from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    """Run one small state end to end so JIT compilation stays out of timed tests."""
    from chofisher import StateSpec, analyze_state
    from chofisher.oracle import fd_solve

    analyze_state(StateSpec(0, 1, 1, 1.0, 0.5, "cho"))
    fd_solve(StateSpec(0, 0, 0, 1.0, 1.0, "cho"), n=2000)
    yield


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS, format_line

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(RESULTS):
        terminalreporter.write_line(format_line(criterion))
