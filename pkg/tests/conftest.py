import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # Criterion lines are recorded while tests run but fd-level capture would
    # swallow them; replay them here, after capture has ended.
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "CRITERION_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.line(line)
