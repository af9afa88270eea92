import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def sp4():
    from bicovariant.groups import group_from_tag

    return group_from_tag("sp4")


@pytest.fixture(scope="session")
def so5():
    from bicovariant.groups import group_from_tag

    return group_from_tag("so5")


@pytest.fixture(scope="session", params=["sp4", "so5"])
def group(request):
    from bicovariant.groups import group_from_tag

    return group_from_tag(request.param)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
