import time

import pytest

_LINES = []


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.details = []

    def log(self, text: str):
        self.details.append(text)


@pytest.fixture
def criterion(request):
    """Records one pass/fail line per acceptance criterion for the summary."""
    made = []

    def make(number: int, title: str) -> _Criterion:
        c = _Criterion(number, title)
        made.append(c)
        return c

    start = time.perf_counter()
    yield make
    elapsed = time.perf_counter() - start
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    for c in made:
        extra = "; ".join(c.details)
        line = f"criterion {c.number:>2} {'PASS' if ok else 'FAIL'}  {c.title}  ({elapsed:.2f}s)"
        _LINES.append((c.number, line + (f"  [{extra}]" if extra else "")))
        print("\n" + _LINES[-1][1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES):
        terminalreporter.write_line(line)
