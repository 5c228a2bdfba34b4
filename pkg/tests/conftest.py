import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = "") -> None:
        verdict = "PASS" if ok and seconds < limit else "FAIL"
        line = f"criterion {number:>2} {verdict}  {title} ({seconds:.2f}s < {limit:g}s){'  ' + detail if detail else ''}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
