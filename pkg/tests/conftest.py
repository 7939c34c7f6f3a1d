import numpy as np
import pytest

from twistlab.config import RANDOM_SEED
from twistlab.curve import make_curve
from twistlab.descent import FullTorsionCurve


@pytest.fixture
def rng():
    return np.random.default_rng(RANDOM_SEED)


@pytest.fixture
def e0():
    """y^2 + y = x^3 - x^2, discriminant -11."""
    return make_curve([0, -1, 1, 0, 0])


@pytest.fixture
def congruent():
    """y^2 = x^3 - x."""
    return make_curve([0, 0, 0, -1, 0])


@pytest.fixture
def full_congruent():
    return FullTorsionCurve(0, 1, -1)
