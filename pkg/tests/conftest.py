import pytest

from tetrarefl.catalog import MAPS

# filled in by test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


def _perturb(coefficient):
    """3dr with one coefficient changed from 1 to 2."""
    rules = {
        "f-num": lambda a, b, c: (2 * a * b / (a + c), a + c, b * c / (a + c)),
        "f-den-x1": lambda a, b, c: (a * b / (2 * a + c), a + c, b * c / (a + c)),
        "f-den-x3": lambda a, b, c: (a * b / (a + 2 * c), a + c, b * c / (a + c)),
        "g-x1": lambda a, b, c: (a * b / (a + c), 2 * a + c, b * c / (a + c)),
        "g-x3": lambda a, b, c: (a * b / (a + c), a + 2 * c, b * c / (a + c)),
        "h-num": lambda a, b, c: (a * b / (a + c), a + c, 2 * b * c / (a + c)),
        "h-den-x1": lambda a, b, c: (a * b / (a + c), a + c, b * c / (2 * a + c)),
        "h-den-x3": lambda a, b, c: (a * b / (a + c), a + c, b * c / (a + 2 * c)),
    }
    return MAPS["3dr"].with_func(rules[coefficient], id=f"3dr~{coefficient}")


PERTURBATIONS = ("f-num", "f-den-x1", "f-den-x3", "g-x1", "g-x3", "h-num", "h-den-x1", "h-den-x3")


@pytest.fixture
def acceptance():
    """Record the verdict line for one criterion, then assert it."""
    def record(n, ok, text):
        ACCEPTANCE_LINES[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        print(ACCEPTANCE_LINES[n])
        assert ok, text
    return record


@pytest.fixture
def perturbed():
    return _perturb
