from __future__ import annotations

from fractions import Fraction

import pytest

from liberal_succession.document import example_document

_ACCEPTANCE: dict[str, str] = {}


def state(*coords) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in coords)


@pytest.fixture(scope="session")
def line_community():
    return example_document("sec-c").community()


@pytest.fixture(scope="session")
def plane_community():
    return example_document("sec-f").community()


@pytest.fixture(scope="session")
def min_community():
    return example_document("sec-j").community()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
