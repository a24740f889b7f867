import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(acceptance_log.RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
