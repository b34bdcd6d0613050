"""Shared test plumbing.

The acceptance suite collects one human-readable line per criterion in its
module-level ledger; the terminal-summary hook prints them after the run,
outside pytest's output capture, so the pass/fail lines are always visible.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = (sys.modules.get("test_acceptance")
           or sys.modules.get("tests.test_acceptance"))
    lines = getattr(mod, "ACCEPTANCE_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
