import time

import pytest

_verdicts: dict[int, tuple[bool, str]] = {}


class Criterion:
    def __init__(self, number: int, limit: float):
        self.number = number
        self.limit = limit
        self.start = time.monotonic()
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start


@pytest.fixture
def criterion(request):
    """Times an acceptance criterion and records a one-line verdict."""
    c = Criterion(*request.node.get_closest_marker("criterion").args)
    yield c
    report = getattr(request.node, "rep_call", None)
    ok = bool(report and report.passed) and c.elapsed <= c.limit
    detail = "; ".join(c.notes + [f"{c.elapsed:.1f}s of {c.limit:g}s"])
    _verdicts[c.number] = (ok, detail)
    if report and report.passed:
        assert c.elapsed <= c.limit, f"took {c.elapsed:.1f}s, limit {c.limit:g}s"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, seconds): acceptance criterion with a time limit")


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_verdicts):
        ok, detail = _verdicts[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
