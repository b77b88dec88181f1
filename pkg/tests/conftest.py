import warnings

import pytest

from dressed_rf import REFERENCE_BATH
from dressed_rf.storage import TableCache


@pytest.fixture(scope="session")
def table_cache(tmp_path_factory):
    """One on-disk cache for the whole session; the T=0 table takes seconds."""
    return TableCache(tmp_path_factory.mktemp("phi-cache"))


@pytest.fixture(scope="session")
def reference_table(table_cache):
    def get(temperature, bath=REFERENCE_BATH):
        return table_cache(bath.at(temperature))
    return get


@pytest.fixture(autouse=True)
def _quiet_validity_warnings():
    # weak-field test drives routinely leave 2 Omega > 2 G > Gamma
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="doubly dressed model outside", category=RuntimeWarning)
        yield


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """``record(n, ok, detail)`` -> one summary line per criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(n, ok, detail):
        lines.append((n, f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"))
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
