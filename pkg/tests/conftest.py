import random

import pytest

from lcsverify.fbc import paper_group
from lcsverify.lcsengine import EngineConfig, build
from lcsverify.words import Word, reduce


@pytest.fixture(scope="session")
def group():
    return paper_group()


@pytest.fixture(scope="session")
def engine(group):
    return build(EngineConfig(group, 7))


@pytest.fixture
def rng():
    return random.Random(20240917)


def random_word(rng: random.Random, rank: int = 2, length: int = 12, max_exp: int = 3) -> Word:
    raw = []
    for _ in range(rng.randint(0, length)):
        e = rng.randint(1, max_exp) * rng.choice((1, -1))
        raw.append((rng.randrange(rank), e))
    return reduce(raw)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
