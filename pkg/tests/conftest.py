import math

import pytest
from hypothesis import strategies as st

from coarsehyp.free_group_tree import FreeGroupTree, Word
from coarsehyp.hyperbolic_plane import HyperbolicPlane, PolarPoint
from coarsehyp.maps import tree_fan_map


def word_strategy(max_len=6):
    def build(digits):
        if not digits:
            return Word(())
        first = digits[0] % 4
        rest = tuple(d % 3 for d in digits[1:])
        return Word((first,) + rest)

    return st.lists(st.integers(0, 11), max_size=max_len).map(tuple).map(build)


def polar_strategy(max_r=6.0):
    return st.builds(
        PolarPoint,
        st.floats(0.0, max_r, allow_nan=False, allow_infinity=False),
        st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False, allow_infinity=False))


@pytest.fixture(scope="session")
def tree():
    return FreeGroupTree()


@pytest.fixture(scope="session")
def plane():
    return HyperbolicPlane()


@pytest.fixture(scope="session")
def fan(tree):
    return tree_fan_map(tree)
