import random

import pytest
from hypothesis import strategies as st

from sqdepth.monomials import Instance, InstanceError, MonomialIdeal, FieldSpec


def random_masks(rng: random.Random, n: int, count: int, lo: int = 1, hi: int = 3) -> list[int]:
    out = []
    for _ in range(count):
        k = rng.randint(lo, min(hi, n))
        out.append(sum(1 << t for t in rng.sample(range(n), k)))
    return out


def random_ideal(rng: random.Random, n: int, count: int, lo: int = 1, hi: int = 3) -> MonomialIdeal:
    return MonomialIdeal.from_masks(n, random_masks(rng, n, count, lo, hi))


def random_valid_instance(rng: random.Random, n: int, char: int = 0) -> Instance:
    """Rejection-sample a valid instance with E possibly nonempty."""
    while True:
        d = rng.randint(1, max(1, n - 2))
        F = random_masks(rng, n, rng.randint(1, 4), d, d)
        E = random_masks(rng, n, rng.randint(0, 2), d + 1, d + 2)
        I = MonomialIdeal.from_masks(n, F + E)
        Jm = [m | (1 << rng.randrange(n)) | (1 << rng.randrange(n)) for m in I.masks]
        Jm = [m for m in Jm if bin(m).count("1") >= d + 1 and rng.random() < 0.7]
        try:
            return Instance(n, I, MonomialIdeal.from_masks(n, Jm), FieldSpec(char))
        except InstanceError:
            continue


@st.composite
def ideals(draw, n=6, max_gens=5):
    masks = draw(st.lists(st.integers(min_value=1, max_value=(1 << n) - 1), max_size=max_gens))
    return MonomialIdeal.from_masks(n, masks)


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance criteria register one line each; printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
