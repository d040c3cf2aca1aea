import random

import pytest
from hypothesis import strategies as st

from outerspace.words import reduce

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def letters(rank):
    return st.sampled_from([s * i for i in range(1, rank + 1) for s in (1, -1)])


def words(rank=2, max_size=10, min_size=0):
    return st.lists(letters(rank), min_size=min_size, max_size=max_size).map(reduce)


def nontrivial_words(rank=2, max_size=10):
    return words(rank, max_size, 1).filter(bool)


def random_word(rng: random.Random, rank: int, length: int):
    out = []
    while len(out) < length:
        x = rng.choice([s * i for i in range(1, rank + 1) for s in (1, -1)])
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


@pytest.fixture
def rng():
    return random.Random(20261016)
