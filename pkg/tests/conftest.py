import contextlib
import time

import pytest

_RESULTS: list[tuple[int, str, bool, str]] = []


class Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.notes: list[str] = []
        self.failures: list[str] = []
        self.elapsed = 0.0

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    def note(self, text: str) -> None:
        self.notes.append(text)


@pytest.fixture
def criterion():
    """Context manager that records one acceptance line, even if the body raises."""

    @contextlib.contextmanager
    def run(number: int, title: str, budget: float | None = None):
        c = Criterion(number, title)
        t0 = time.perf_counter()
        try:
            yield c
        except Exception as exc:
            c.failures.append(f"{type(exc).__name__}: {exc}")
            raise
        finally:
            c.elapsed = time.perf_counter() - t0
            if budget is not None:
                c.check(c.elapsed < budget, f"took {c.elapsed:.2f}s, budget {budget:g}s")
            detail = "; ".join(c.failures or c.notes)
            line = f"{c.title} [{c.elapsed:.2f}s]" + (f": {detail}" if detail else "")
            _RESULTS.append((c.number, line, not c.failures, detail))
            print(f"\n[{'PASS' if not c.failures else 'FAIL'}] criterion {c.number}: {line}")
        assert not c.failures, "; ".join(c.failures)

    return run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, line, ok, _ in sorted(_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {line}")
