import sys
from pathlib import Path

import pytest

# the shared brute-force oracles live next to the tests
sys.path.insert(0, str(Path(__file__).parent))

_OUTCOMES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_OUTCOMES] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    seen = item.config.stash[_OUTCOMES].setdefault(marker.args[0], [])
    if report.when == "call" or report.failed or report.skipped:
        seen.append((item.name, report.passed and not hasattr(report, "wasxfail")))


def pytest_terminal_summary(terminalreporter, config):
    outcomes = config.stash[_OUTCOMES]
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        results = outcomes[n]
        ok = all(passed for _, passed in results)
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
        failed = [name for name, passed in results if not passed]
        if failed:
            line += "  (" + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
