import random
from fractions import Fraction

import pytest

from gmech.minimality import build_universe
from gmech.pricing import MarketState, OfferVector

# criterion number -> (passed, message); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def universes():
    """Profiled universes for m = 2..4, built once per session."""
    return {m: build_universe(m) for m in (2, 3, 4)}


def random_state(g, rng: random.Random) -> MarketState:
    return MarketState(g, {e: Fraction(rng.randint(1, 1000), rng.randint(1, 100)) for e in g.edges})


def random_offer(g, rng: random.Random) -> OfferVector:
    return OfferVector(g, {e: Fraction(rng.randint(0, 50), rng.randint(1, 20)) for e in g.edges if rng.random() < 0.7})


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
