from fractions import Fraction

import pytest

from permit_games.production import Situation


@pytest.fixture(scope="session")
def example3() -> Situation:
    """Three-firm reference economy used throughout the worked checks."""
    return Situation.create(
        production=[[2, 3], [3, 2], [1, 1]],
        endowments=[[40, 60, 80], [60, 40, 50]],
        prices=[50, 60],
        tax=14,
        cap=50,
    )


@pytest.fixture(scope="session")
def demands3():
    """Exact optimal permit demands of every coalition of the reference economy."""
    return {
        frozenset({1}): Fraction(20),
        frozenset({2}): Fraction(20),
        frozenset({3}): Fraction(25),
        frozenset({1, 2}): Fraction(40),
        frozenset({1, 3}): Fraction(46),
        frozenset({2, 3}): Fraction(45),
        frozenset({1, 2, 3}): Fraction(66),
    }
