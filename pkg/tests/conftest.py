# Shared fixtures: the two reference subshifts, the standard metric and a
# couple of stock potentials used across the suite.

import pytest

from shiftlab.sft import SymbolicMetric, full_shift_spec, golden_mean_spec
from shiftlab.potentials import Potential


@pytest.fixture(scope="session")
def gm():
    return golden_mean_spec()


@pytest.fixture(scope="session")
def fs2():
    return full_shift_spec(2)


@pytest.fixture(scope="session")
def fs3():
    return full_shift_spec(3)


@pytest.fixture(scope="session")
def met():
    return SymbolicMetric(0.5)


@pytest.fixture(scope="session")
def gm_roof(gm):
    # the non-lattice counting roof pinned by the acceptance suite
    return Potential.from_table(gm, 1, {(1,): 1.0, (2,): 1.6180339887})


@pytest.fixture(scope="session")
def gm_zero(gm):
    return Potential.constant(gm, 0.0)
