# shared fields, generators and fixture paths

from pathlib import Path

import numpy as np
import pytest

from arithlab.services.numfield import BaseField, NumberField

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def q():
    """The rationals as a (trivial) tower"""
    return NumberField(BaseField())


@pytest.fixture(scope="session")
def q_sqrt2_sqrt3():
    return NumberField(BaseField(), [2, 3])


@pytest.fixture
def rng():
    return np.random.default_rng(7)
