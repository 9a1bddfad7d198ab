import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fairdiv import instances


@pytest.fixture
def car():
    return instances.car_rental()


@pytest.fixture
def two_by_two():
    return instances.envy_free_vs_gini_2x2()


@pytest.fixture
def cyclic_three():
    return instances.envy_free_vs_subjective_3x3()


@pytest.fixture
def balanced_pairs():
    return instances.balanced_pairs_2x4()


@pytest.fixture
def crossed_quarter():
    return instances.crossed_bids_2x2(Fraction(1, 4))
