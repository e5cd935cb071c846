"""Shared fixtures plus the acceptance-summary reporter.

Acceptance tests register one line per criterion through ``record_criterion``;
the lines are printed in a terminal summary block at the end of the run so
the per-criterion verdicts are visible regardless of capture settings.
"""

import numpy as np
import pytest

import acorbfn as ab

_CRITERIA = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _CRITERIA.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed, detail in _CRITERIA:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def robot() -> ab.RobotParams:
    return ab.RobotParams()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
