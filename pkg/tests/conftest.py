import pytest

from planarfix.geometry import build_closed_curve

ACCEPTANCE_LINES = []

TRIANGLE = [(-1.0, 0.0), (1.0, 0.0), (0.0, 2.0)]
EXAMPLE_B = [(-3.0, 0.0), (0.0, 7.0), (4.5, 1.2), (2.5, 1.73), (-0.5, 1.73), (-1.5, 2.6),
             (1.5, -2.6), (4.0, -1.0), (2.0, 3.46), (-1.0, -1.73)]


@pytest.fixture
def triangle():
    return build_closed_curve(TRIANGLE)


@pytest.fixture
def triangle_twice():
    return build_closed_curve(TRIANGLE * 2)


@pytest.fixture
def square():
    return build_closed_curve([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def bowtie():
    return build_closed_curve([(0, 0), (2, 2), (2, 0), (0, 2)])


@pytest.fixture
def example_b():
    return build_closed_curve(EXAMPLE_B)


@pytest.fixture
def acceptance():
    """Record a one-line verdict for the terminal summary."""
    def record(number, title, passed, detail=""):
        line = f"criterion {number} {'PASS' if passed else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
