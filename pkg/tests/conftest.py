import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    entry = {"name": request.node.name, "detail": ""}
    ACCEPTANCE_LINES.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        for entry in ACCEPTANCE_LINES:
            if entry["name"] == item.name:
                entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE_LINES:
        status = "PASS" if entry.get("passed") else "FAIL"
        terminalreporter.write_line(f"[{status}] {entry['name']}: {entry['detail']}")
