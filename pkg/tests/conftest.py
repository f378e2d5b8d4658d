import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("maglab", max_examples=25, deadline=None)
settings.load_profile("maglab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance(pytestconfig):
    """Collects one status line per acceptance criterion for the terminal summary."""
    lines = pytestconfig.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title} | {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
