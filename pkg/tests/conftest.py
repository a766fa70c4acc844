import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bitchrom.packed import ALL_LAYOUTS

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

layouts = st.sampled_from(ALL_LAYOUTS)

# one PASS/FAIL line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(params=ALL_LAYOUTS, ids=lambda l: l.name)
def layout(request):
    return request.param
