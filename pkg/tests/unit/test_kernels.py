"""Unit tests for the vectorised tower kernels against scalar arithmetic."""

from __future__ import annotations

import numpy as np
import pytest

from src.models.entities import FieldSpec
from src.services.kernels import TowerArrays
from src.services.tower import Tower, make_tower


@pytest.fixture(scope="module", params=[FieldSpec(p=5), FieldSpec(p=3, k=2)], ids=["5^1", "3^2"])
def tower(request: pytest.FixtureRequest) -> Tower:
    return make_tower(request.param)


@pytest.fixture(scope="module")
def arrays(tower: Tower) -> TowerArrays:
    return TowerArrays(tower)


def _as_elements(tower: Tower, arrays: TowerArrays, arr: np.ndarray) -> list:
    return [tower.from_index(int(i)) for i in arrays.encode(arr)]


def test_encode_is_index_order(tower: Tower, arrays: TowerArrays) -> None:
    assert np.array_equal(arrays.encode(arrays.all_elements()), np.arange(tower.size))


def test_scale_matches_scalar_mul(tower: Tower, arrays: TowerArrays) -> None:
    c = tower.from_index(tower.size // 2 + 3)
    products = _as_elements(tower, arrays, arrays.scale(arrays.constant(c), arrays.all_elements()))

    for index, product in enumerate(products):
        assert product == c * tower.from_index(index)


def test_frobenius_matches_scalar(tower: Tower, arrays: TowerArrays) -> None:
    images = _as_elements(tower, arrays, arrays.frobenius(arrays.all_elements()))

    for index, image in enumerate(images):
        assert image == tower.frobenius(tower.from_index(index))


def test_inverse_sends_zero_to_zero(tower: Tower, arrays: TowerArrays) -> None:
    x = arrays.all_elements()
    products = arrays.encode(arrays.mul(x, arrays.inv(x)))

    assert products[0] == 0
    assert np.all(products[1:] == tower.index_of(tower.one))


def test_norm_matches_scalar(tower: Tower, arrays: TowerArrays) -> None:
    norms = arrays.norm(arrays.all_elements())

    for index in range(0, tower.size, 11):
        assert tuple(int(v) for v in norms[index]) == tower.norm(tower.from_index(index))


def test_pow_matches_scalar(tower: Tower, arrays: TowerArrays) -> None:
    e = tower.q * tower.q + tower.q - 1
    powers = _as_elements(tower, arrays, arrays.pow(arrays.all_elements(), e))

    for index in range(0, tower.size, 13):
        assert powers[index] == tower.from_index(index) ** e


def test_pow_zero_is_one(tower: Tower, arrays: TowerArrays) -> None:
    ones = arrays.encode(arrays.pow(arrays.all_elements(), 0))

    assert np.all(ones == tower.index_of(tower.one))


def test_horner_evaluates_linear_polynomial(tower: Tower, arrays: TowerArrays) -> None:
    c0, c1 = tower.embed(2), tower.from_index(tower.q + 1)
    values = _as_elements(tower, arrays, arrays.horner([arrays.constant(c0), arrays.constant(c1)], arrays.all_elements()))

    for index in range(0, tower.size, 5):
        assert values[index] == c0 + c1 * tower.from_index(index)
