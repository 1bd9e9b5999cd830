from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


# criterion number -> (title, passed, detail), filled by the acceptance suite
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}
# test name -> passed, for the randomized laws already run in this session
PROPERTY_OUTCOMES: dict[str, bool] = {}


def pytest_collection_modifyitems(items):
    # acceptance runs last so it can reuse the property suite's outcomes
    items.sort(key=lambda item: item.module.__name__ == "test_acceptance")


def pytest_runtest_logreport(report):
    if report.when == "call" and report.nodeid.startswith("tests/test_properties.py::"):
        PROPERTY_OUTCOMES[report.nodeid.rsplit("::", 1)[1]] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
