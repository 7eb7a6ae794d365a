"""Shared strategies and the acceptance-criterion summary."""

import math

import pytest
from hypothesis import strategies as st

from wignerfriend.core import Settings

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False, allow_infinity=False)


@st.composite
def settings_strategy(draw):
    return Settings(*(draw(angles) for _ in range(4)))


_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    prev = _CRITERIA.get(number, (title, True))
    _CRITERIA[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed = _CRITERIA[number]
        terminalreporter.write_line(f"[AC-{number}] {'PASS' if passed else 'FAIL'} {title}")


@pytest.fixture
def tsirelson():
    return Settings(0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)
