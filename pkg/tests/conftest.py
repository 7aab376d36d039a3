"""Prints one PASS/FAIL line per acceptance criterion after every run that
includes test_acceptance.py, regardless of output capture settings."""

ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts: dict[str, str] = {}
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_FILE not in nodeid or "::" not in nodeid:
                continue
            name = nodeid.split("::")[-1].removeprefix("test_")
            if verdicts.get(name) != "FAIL":
                verdicts[name] = label
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for name, label in verdicts.items():
            terminalreporter.write_line(f"{label}  {name}")
