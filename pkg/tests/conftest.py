import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance_line(request):
    """Write a criterion line to the terminal now and again in the summary."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(line: str) -> None:
        _LINES.append(line)
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
