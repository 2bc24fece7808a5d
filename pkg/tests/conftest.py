import pytest

from galcoh import _kernel, _smith_py
from galcoh.cohomology import clear_caches

KERNEL_FUNCS = ("smith_sparse", "replay_rows", "replay_rows_inverse", "replay_cols", "replay_cols_inverse")

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=["default", "python"])
def backend(request, monkeypatch):
    """Run a test with the default kernel and again with the pure-Python one."""
    if request.param == "python":
        for name in KERNEL_FUNCS:
            monkeypatch.setattr(_kernel, name, getattr(_smith_py, name))
    clear_caches()
    yield request.param
    clear_caches()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
