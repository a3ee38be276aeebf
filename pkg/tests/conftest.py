"""Test-session plumbing: collect acceptance criterion verdicts and print
one pass/fail line per criterion at the end of the run."""

ACCEPTANCE_RESULTS = []


def record_criterion(number, description, ok):
    ACCEPTANCE_RESULTS.append((number, description, ok))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, description, ok in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            "ACCEPTANCE %2d %s: %s" % (number, verdict, description))
