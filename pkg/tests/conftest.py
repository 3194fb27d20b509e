import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nomaut.automata import expand, load_fixture, spec_pool  # noqa: E402


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(name) for name in ("ex1", "ex2", "ex3")}


@pytest.fixture
def expanded(fixtures):
    def make(name, pool=None, depth=3):
        spec = fixtures[name]
        return expand(spec, pool if pool is not None else spec_pool(spec, depth))
    return make


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
