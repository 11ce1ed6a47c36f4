import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stop_forge.instance import Instance  # noqa: E402

# vertex ids of the small worked example
S, I, K, J, L, T = 0, 1, 2, 3, 4, 5
EXAMPLE_ARCS = {
    (S, I): 1.0, (S, L): 1.0, (I, L): 1.0, (I, K): 1.0, (K, I): 1.0,
    (K, J): 2.0, (L, J): 2.0, (L, T): 1.0, (J, T): 1.0,
}


def make_example(mandatory=(), time_limit=4.0, fleet=1):
    # profits are not given for this example; unit profits stand in
    profit = {v: 1 for v in (I, K, J, L) if v not in mandatory}
    return Instance(name="example", n=6, origin=S, destination=T, mandatory=frozenset(mandatory),
                    profit=profit, arcs=dict(EXAMPLE_ARCS), fleet_size=fleet,
                    time_limit=time_limit)


@pytest.fixture
def example():
    return make_example()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash.setdefault(_RESULTS, {})


_RESULTS = pytest.StashKey[dict]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        results = item.config.stash[_RESULTS]
        number, title = mark.args
        prev = results.get(number, (title, True))
        results[number] = (title, prev[1] and rep.outcome == "passed")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
