import warnings

import pytest

from invsim import ManeuverInput, MirageDoubleRoll, mirage3, run

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def mirage():
    return mirage3()


@pytest.fixture(scope="session")
def mirage_run(mirage):
    """The reference Mirage double roll at a 1 ms step."""
    maneuver = ManeuverInput(MirageDoubleRoll(), 0.001)
    return maneuver, run(maneuver, mirage)


def run_quiet(maneuver, params, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return run(maneuver, params, **kw)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mirage_round_trip(mirage, mirage_run):
    from invsim.forward import round_trip

    maneuver, series = mirage_run
    return round_trip(maneuver, series, mirage, return_states=True)
