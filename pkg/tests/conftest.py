import os
import time

import pytest

from taut import certify

SEED_A = certify.MASTER_SEED
SEED_B = 777

_criteria: dict[int, list] = {}
_setup_time: dict[str, float] = {}


@pytest.fixture(scope="session")
def ledger_a():
    t0 = time.perf_counter()
    certs = certify.run_all(seed=SEED_A, jobs=os.cpu_count() or 1)
    return certs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def ledger_b():
    return certify.run_all(seed=SEED_B, jobs=os.cpu_count() or 1)


def pytest_runtest_logreport(report):
    num = report.user_properties and dict(report.user_properties).get("criterion")
    if not num:
        return
    if report.when == "setup" and report.passed:
        # fixture time (shared registry runs) counts towards the criterion that first needs it
        _setup_time[report.nodeid] = report.duration
    elif report.when == "call" or (report.when == "setup" and report.failed):
        elapsed = report.duration + _setup_time.pop(report.nodeid, 0.0)
        _criteria.setdefault(num, []).append((report.passed, elapsed, report.nodeid.split("::")[-1]))


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria):
        rows = _criteria[num]
        ok = all(p for p, _, _ in rows)
        secs = sum(d for _, d, _ in rows)
        failed = [n for p, _, n in rows if not p]
        tail = f"  failing: {', '.join(failed)}" if failed else ""
        tr.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  ({len(rows)} checks, {secs:.1f} s){tail}")
