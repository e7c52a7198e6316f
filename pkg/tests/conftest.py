import pytest

ACCEPTANCE_TITLES = {
    1: "asymmetric GARCH(1,1): second moment and r^2 autocovariances vs Monte Carlo",
    2: "fourth moment: Monte Carlo and cross-parametrization agreement",
    3: "leverage function: closed form, Monte Carlo, sign grid, norm bound",
    4: "long memory: decay slope, partial-sum exponent, lag ratio",
    5: "condition checkers: verdict table and Rosenthal constant",
    6: "coefficient identities: phi inverse, phi sum, smoothed power law, gamma = 0",
    7: "volatility floor over random specs",
    8: "QMLE recovery and scale equivariance",
}

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    rep = outcome.get_result()
    if rep.when == "call" or rep.failed or rep.skipped:
        key = marker.args[0]
        # the worst phase outcome wins for a test
        prev = _results.setdefault(key, {}).get(item.nodeid)
        if prev in (None, "passed"):
            _results[key][item.nodeid] = rep.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_TITLES):
        outcomes = _results.get(key)
        if not outcomes:
            tr.write_line(f"criterion {key}: NOT RUN  {ACCEPTANCE_TITLES[key]}")
            continue
        n_ok = sum(o == "passed" for o in outcomes.values())
        verdict = "PASS" if n_ok == len(outcomes) else "FAIL"
        tr.write_line(f"criterion {key}: {verdict} ({n_ok}/{len(outcomes)} checks)  "
                      f"{ACCEPTANCE_TITLES[key]}")
