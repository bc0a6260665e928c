from collections import defaultdict

import pytest

CRITERIA = {
    1: "total functions: mm = fc = fbs",
    2: "duality: fbs_at = fc_at",
    3: "partial chain: fbs <= ca1",
    4: "Gth separation",
    5: "Osp separation",
    6: "sqrt(n*bs) barrier",
    7: "Fpp o OR_k matching construction",
    8: "shipped witness soundness",
    9: "solver oracle equivalence",
}

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[marker.args[0]].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, label in CRITERIA.items():
        results = _outcomes.get(k)
        if not results:
            continue
        ok = all(o == "passed" for _, o in results)
        failed = [name for name, o in results if o != "passed"]
        line = f"criterion {k} {'PASS' if ok else 'FAIL'}: {label}"
        if failed:
            line += f" (failing: {', '.join(failed)})"
        tr.write_line(line)
