import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbitclosure.selftest import load_fixture  # noqa: E402

FIXTURE_NAMES = ("additive.toy", "squaring.toy", "scaling.toy", "rational.toy", "twogen.toy")


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_system(request):
    return load_fixture(request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
