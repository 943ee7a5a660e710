import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Log one pass/fail line per acceptance criterion."""

    def log(number, title, checks):
        ok = all(c[1] for c in checks)
        detail = "; ".join(f"{name}={'ok' if good else 'FAIL'} ({info})" for name, good, info in checks)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} -- {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit(rng, n):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)
