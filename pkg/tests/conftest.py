"""Collects the acceptance verdicts and prints them as a block after the run."""

VERDICTS = {}


def record(criterion, ok, detail=""):
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    VERDICTS[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS, key=lambda k: (int(str(k).rstrip("abcdefgh")), str(k))):
        terminalreporter.write_line(VERDICTS[key])
