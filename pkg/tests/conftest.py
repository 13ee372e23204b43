import random

import pytest

from sudokusym.grid import parse_grid

# complete grids from a randomized backtracking filler (seeds 1000..1004)
FIXED_GRIDS = [
    "653842917172396854948715263526137498839524176714968532297453681481679325365281749",
    "392654781865173942147289365473816529921435876658927134286791453739542618514368297",
    "439685271627314985815927634962438517341759826578162349754893162193276458286541793",
    "158739624729846135346125897514392768693587412872614953981273546435968271267451389",
    "328691547679435182451782396865273419132964758794158623216349875983517264547826931",
]

SHIFTED = "123456789456789123789123456234567891567891234891234567345678912678912345912345678"


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture(params=range(len(FIXED_GRIDS)))
def fixed_grid(request):
    return parse_grid(FIXED_GRIDS[request.param])


@pytest.fixture
def shifted():
    return parse_grid(SHIFTED)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(test_acceptance.RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}: {detail}")
