import os

import pytest

from lowzeros.zerocache import ZeroStore

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def zero_store(tmp_path_factory):
    """One zero store per session; set LOWZEROS_TEST_CACHE to reuse zeros across runs."""
    path = os.environ.get("LOWZEROS_TEST_CACHE") or tmp_path_factory.mktemp("zeros")
    return ZeroStore(path)


@pytest.fixture(scope="session")
def accept():
    def record(num: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
