import pytest

from treeshift.core import canonical_binary_catalog, catalog_system

# Lines recorded by test_acceptance, echoed in the terminal summary.
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", help="rewrite tests/golden/*.json from current output")


@pytest.fixture(scope="session")
def update_golden(request):
    return request.config.getoption("--update-golden")


@pytest.fixture(scope="session")
def catalog():
    return canonical_binary_catalog()


@pytest.fixture
def X():
    """``X(4)`` -> the catalog system X_4."""
    return catalog_system


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
