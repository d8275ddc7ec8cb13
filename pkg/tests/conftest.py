import pytest
from hypothesis import settings

from hadtowers.towers import Coord, Tower

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def t1():
    return Tower({Coord(1, 0): (Coord(0, 5),), Coord(2, 0): (Coord(1, 0), Coord(0, 3))})


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_lines(request):
    return request.config.stash.setdefault(ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
