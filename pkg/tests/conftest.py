import warnings

import pytest

from nomlog.model import Bound, least_model_enum
from nomlog.syntax import parse_program

from oracles import program_text


def _model(name):
    program = parse_program(program_text(name))
    return least_model_enum(program, Bound(max_term_depth=2, name_universe_size=3))


@pytest.fixture(scope="session")
def subst_model():
    return _model("subst_fig.nl")


@pytest.fixture(scope="session")
def typ_model():
    return _model("typ.nl")


@pytest.fixture(autouse=True)
def quiet_auto_declarations():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="auto-declaring")
        yield


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
