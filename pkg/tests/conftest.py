import re

import pytest

from relhyp.words import Alphabet, Presentation

# filled in by tests/test_acceptance.py as criteria run
ACCEPTANCE_DETAILS: dict = {}


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, after capture ends."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_criterion_(\d+)", getattr(rep, "nodeid", ""))
            if m is None:
                continue
            num = int(m.group(1))
            if outcome != "passed" or num not in rows:
                rows[num] = "PASS" if outcome == "passed" else "FAIL"
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        detail = ACCEPTANCE_DETAILS.get(num, "")
        suffix = f": {detail}" if detail else ""
        terminalreporter.line(f"criterion {num:2d} {rows[num]}{suffix}")


@pytest.fixture(scope="session")
def alpha_ab():
    return Alphabet(["a", "b"])


@pytest.fixture(scope="session")
def pres_z():
    return Presentation(Alphabet(["a"]), ())


@pytest.fixture(scope="session")
def pres_f2(alpha_ab):
    return Presentation(alpha_ab, ())


@pytest.fixture(scope="session")
def pres_z2(alpha_ab):
    return Presentation(alpha_ab, (alpha_ab.parse("abAB"),))
