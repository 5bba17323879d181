import pytest

ACCEPTANCE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if ACCEPTANCE in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")


@pytest.fixture
def report_line(capsys):
    """Print one summary line straight to the terminal, bypassing capture."""

    def emit(text):
        with capsys.disabled():
            print(text)

    return emit
