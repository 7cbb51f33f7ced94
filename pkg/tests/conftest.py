import pytest

from trideriv.trinomial import TrinomialSpec

# Degrees of the generators in the reference bases for specs A, B and C.
BASIS_A = {"T01": [-3, 3], "T02": [1, 1], "T11": [0, 2], "T21": [0, 3]}
BASIS_B = {"T01": [2, 0, 1], "T02": [0, 2, -1], "T11": [2, 2, 1], "T12": [0, 0, -1], "T21": [1, 1, 0]}
BASIS_C = {"T01": [1, 0, 0], "T11": [1, 1, 0], "T21": [1, 0, 1]}


@pytest.fixture
def spec_a():
    return TrinomialSpec.of((1, 3), (3,), (2,))


@pytest.fixture
def spec_b():
    return TrinomialSpec.of((1, 1), (1, 1), (2,))


@pytest.fixture
def spec_c():
    return TrinomialSpec.of((2,), (2,), (2,))


@pytest.fixture
def spec_d():
    return TrinomialSpec.of((1, 1), (1, 1), (1, 1))
