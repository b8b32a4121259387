import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line per acceptance criterion, then assert."""
    def _verdict(num, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
        request.config._criterion_lines.append(line)
        assert ok, line
    return _verdict


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
