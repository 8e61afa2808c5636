from __future__ import annotations

import random
from fractions import Fraction

import pytest

from wvnjacobi import make_operator


def random_rationals(rng: random.Random, count: int, lo: int = 1, hi: int = 9) -> list[Fraction]:
    return [Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(count)]


def random_operator(rng: random.Random, T: int, with_b: bool = False):
    a = random_rationals(rng, T)
    b = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(T)] if with_b else None
    return make_operator(a, b)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
