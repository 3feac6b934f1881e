"""Shared pytest wiring.

Acceptance tests push one formatted line per criterion into a registry;
the terminal-summary hook prints the whole block at the end of the run
so the pass/fail verdicts are visible even when stdout is captured.
"""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
