import pytest

# acceptance verdicts, one line per criterion, printed after the run
VERDICTS: dict[int, str] = {}


@pytest.fixture
def verdict(request):
    """Call ``verdict(k, ok, detail)`` once; a crash before that records FAIL."""
    seen = []

    def record(k: int, ok: bool, detail: str) -> bool:
        seen.append(k)
        VERDICTS[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(VERDICTS[k])
        return ok

    yield record
    if not seen:
        k = request.node.get_closest_marker("criterion").args[0]
        VERDICTS[k] = f"criterion {k:2d}: FAIL  (error before a verdict)"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
