from __future__ import annotations

import contextlib

import pytest

# Filled by the acceptance tests; one line per criterion is printed at the end.
CRITERIA: dict[int, tuple[str, str]] = {}


class Criterion:
    def __init__(self, number: int, title: str) -> None:
        self.number = number
        self.title = title
        self.detail = ""
        self.soft_flag = ""

    @contextlib.contextmanager
    def check(self):
        try:
            yield self
        except BaseException as exc:
            CRITERIA[self.number] = ("FAIL", f"{self.title}: {self.detail} ({type(exc).__name__}: {exc})".strip())
            raise
        status = "SOFT-FLAG" if self.soft_flag else "PASS"
        note = f" [{self.soft_flag}]" if self.soft_flag else ""
        CRITERIA[self.number] = (status, f"{self.title}: {self.detail}{note}")


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        status, text = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2} {status:<9} {text}")
