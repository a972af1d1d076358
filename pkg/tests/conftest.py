import time

import pytest

from ainftycat.io import load

ACCEPTANCE: dict[int, str] = {}
_START = time.monotonic()


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(name)
        return cache[name]

    return get


@pytest.fixture
def record():
    def put(n: int, ok: bool, detail: str):
        ACCEPTANCE[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE[n])
        return ok

    return put


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
    terminalreporter.write_line(f"suite wall time: {time.monotonic() - _START:.1f} s")
