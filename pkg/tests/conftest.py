import pytest

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """record(n, ok, detail) stores one PASS/FAIL/SKIP line per acceptance criterion."""
    lines = request.config.stash.setdefault(_LINES, {})

    def record(n, ok, detail=""):
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        lines[n] = f"criterion {n:>2}: {status}  {detail}"
        print(lines[n])
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
