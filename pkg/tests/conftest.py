import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def measured(request):
    """Dict whose entries are echoed on the criterion's summary line."""
    out = {}
    request.node.measured = out
    return out


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num, title = mark.args
    detail = ", ".join(f"{k}={v}" for k, v in getattr(item, "measured", {}).items())
    _CRITERIA[num] = (title, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[num]
        line = f"[{status}] {num}. {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
