import pytest

from conserva.algebra import builtin
from conserva.verify import ALGEBRAS, profile

# lines recorded by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def tables():
    return {name: builtin(name) for name in ALGEBRAS}


@pytest.fixture(scope="session")
def profiles(tables):
    """Solver outputs for each packaged table, computed once per session."""
    return {name: profile(A) for name, A in tables.items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def paper_run():
    """Exit status and JSON report of ``conserva verify-paper --json``."""
    import contextlib
    import io
    import json

    from conserva.cli import main

    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        status = main(["verify-paper", "--json"])
    return status, json.loads(out.getvalue())
