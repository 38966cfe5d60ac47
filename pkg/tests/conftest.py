import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wassmodel import Distribution, GroundMetric

GOLDEN = Path(__file__).parent / "golden"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


# -- hypothesis strategies ----------------------------------------------------

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
nonzero_rationals = rationals.filter(lambda x: x != 0)
nonneg_rationals = st.fractions(min_value=0, max_value=20, max_denominator=60)


@st.composite
def distributions(draw, n):
    weights = draw(st.lists(st.integers(0, 12), min_size=n, max_size=n).filter(lambda w: sum(w) > 0))
    total = sum(weights)
    return Distribution(tuple(Fraction(w, total) for w in weights))


@st.composite
def interior_distributions(draw, n):
    weights = draw(st.lists(st.integers(1, 12), min_size=n, max_size=n))
    total = sum(weights)
    return Distribution(tuple(Fraction(w, total) for w in weights))


@st.composite
def metrics(draw, n, positive=False):
    lo = 1 if positive else 0
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = Fraction(draw(st.integers(lo, 9)), draw(st.integers(1, 4)))
    return GroundMetric(tuple(tuple(r) for r in m))


# -- plain random helpers (for seeded loops outside hypothesis) -----------------

def random_distribution(rng: random.Random, n: int, interior: bool = False) -> Distribution:
    lo = 1 if interior else 0
    while True:
        w = [rng.randint(lo, 20) for _ in range(n)]
        if sum(w):
            return Distribution(tuple(Fraction(x, sum(w)) for x in w))


def random_metric(rng: random.Random, n: int, hi: int = 50, den: int = 7) -> GroundMetric:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = Fraction(rng.randint(1, hi), rng.randint(1, den))
    return GroundMetric(tuple(tuple(r) for r in m))


def read_components(name: str) -> list[frozenset]:
    """Generator sets of an ideal golden file, one per component."""
    out = []
    for line in (GOLDEN / name).read_text(encoding="utf-8").splitlines():
        body = line.strip().rstrip("∩").strip().strip("⟨⟩")
        gens = [g.strip()[3:-1] for g in body.split(",")]
        out.append(frozenset((int(g[0]), int(g[1])) for g in gens))
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
