"""Shared fixtures and the acceptance-criteria summary hook."""

import numpy as np
import pytest

import graphfs

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def iris():
    return graphfs.load_iris()


@pytest.fixture
def two_class_data():
    """Small labeled dataset: feature 0 separates the classes, feature 2 is noise."""
    rng = np.random.default_rng(11)
    T = 60
    labels = np.repeat([0, 1], T // 2)
    values = np.column_stack(
        [
            labels * 3.0 + rng.normal(0, 0.5, T),
            rng.normal(0, 1.0, T),
            rng.normal(5, 2.0, T),
        ]
    )
    return graphfs.Dataset(values=values, labels=labels)
