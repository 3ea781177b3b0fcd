"""Unit tests for field spec parsing and scalar tower arithmetic."""

from __future__ import annotations

import random

import pytest

from src.lib.exceptions import BudgetExceededError, FieldArithmeticError, FieldSpecError
from src.models.entities import FieldSpec
from src.services.tower import Tower, make_tower, parse_field_spec


@pytest.fixture(scope="module")
def tower5() -> Tower:
    return make_tower(FieldSpec(p=5))


@pytest.fixture(scope="module")
def tower7() -> Tower:
    return make_tower(FieldSpec(p=7))


@pytest.fixture(scope="module")
def tower9() -> Tower:
    return make_tower(FieldSpec(p=3, k=2))


def test_parse_field_spec_plain() -> None:
    spec = parse_field_spec("7^1")

    assert spec == FieldSpec(p=7, k=1)
    assert spec.q == 7


def test_parse_field_spec_with_moduli() -> None:
    spec = parse_field_spec("3^2:2,2,1:1|1,0,0,1")

    assert spec.g == (2, 2, 1)
    assert spec.h == ((1, 1), (0, 0), (0, 0), (1, 0))


@pytest.mark.parametrize("text", ["", "7", "7^", "x^1", "7^1:1:2:3"])
def test_parse_field_spec_rejects_malformed(text: str) -> None:
    with pytest.raises(FieldSpecError, match="Malformed"):
        parse_field_spec(text)


@pytest.mark.parametrize(("p", "k"), [(2, 1), (4, 1), (9, 1), (5, 0)])
def test_make_tower_rejects_bad_parameters(p: int, k: int) -> None:
    with pytest.raises(FieldSpecError):
        make_tower(FieldSpec(p=p, k=k))


def test_make_tower_rejects_reducible_cubic() -> None:
    # s^3 - 1 has the root 1
    with pytest.raises(FieldSpecError, match="reducible"):
        make_tower(parse_field_spec("5^1::4,0,0,1"))


def test_spec_string_round_trips(tower9: Tower) -> None:
    rebuilt = make_tower(parse_field_spec(tower9.spec.to_string()))

    assert rebuilt.g == tower9.g
    assert rebuilt.h == tower9.h
    assert rebuilt.describe() == "F_{3^6}"


def test_index_round_trip(tower5: Tower) -> None:
    for index in (0, 1, 7, 63, 124):
        assert tower5.index_of(tower5.from_index(index)) == index


def test_enumerate_starts_at_zero_and_covers_field(tower5: Tower) -> None:
    elements = list(tower5.enumerate())

    assert len(elements) == 125
    assert elements[0] == tower5.zero
    assert len({x.coords for x in elements}) == 125


def test_inverse_of_every_nonzero_element(tower5: Tower) -> None:
    for x in tower5.enumerate():
        if not x.is_zero:
            assert x * x ** -1 == tower5.one


def test_inverse_of_zero_raises(tower5: Tower) -> None:
    with pytest.raises(FieldArithmeticError):
        tower5.inv(tower5.zero)


def test_frobenius_matches_q_power(tower5: Tower, tower9: Tower) -> None:
    for tower in (tower5, tower9):
        for index in range(0, tower.size, 7):
            x = tower.from_index(index)
            assert tower.frobenius(x) == x ** tower.q


def test_q_cubed_power_is_identity(tower9: Tower) -> None:
    for index in range(1, tower9.size, 31):
        x = tower9.from_index(index)
        assert tower9.frobenius(tower9.frobenius(tower9.frobenius(x))) == x


def test_norm_lies_in_base_field(tower5: Tower) -> None:
    e = tower5.q * tower5.q + tower5.q + 1
    for index in range(1, tower5.size, 9):
        x = tower5.from_index(index)
        assert tower5.embed(tower5.norm(x)) == x ** e


def test_embedded_integers_multiply_like_integers(tower5: Tower) -> None:
    assert tower5.embed(3) * tower5.embed(4) == tower5.embed(2)
    assert tower5.embed(-1) == tower5.embed(4)


def test_primitive_element_has_full_order(tower5: Tower) -> None:
    assert tower5.order(tower5.primitive) == 124


def test_mu_elements(tower5: Tower) -> None:
    mu = tower5.mu_elements()

    assert len(mu) == 31
    assert len({u.coords for u in mu}) == 31
    assert all(u ** 31 == tower5.one for u in mu)
    assert tower5.in_mu(mu[5], 31)
    assert not tower5.in_mu(tower5.zero, 31)


def test_mu_elements_rejects_non_divisor(tower5: Tower) -> None:
    with pytest.raises(ValueError, match="does not divide"):
        tower5.mu_elements(7)


def test_enumeration_budget_enforced() -> None:
    tower = make_tower(FieldSpec(p=5), enumeration_budget=100)

    with pytest.raises(BudgetExceededError):
        list(tower.enumerate())


def test_to_dict_carries_spec(tower5: Tower) -> None:
    data = tower5.to_dict()

    assert data["p"] == 5
    assert data["q"] == 5
    assert parse_field_spec(data["spec"]).h == tower5.h


def _sample(tower: Tower, seed: int, n: int = 40) -> list:
    rng = random.Random(seed)
    return [tower.from_index(rng.randrange(tower.size)) for _ in range(n)]


def test_field_axioms_on_samples(tower9: Tower) -> None:
    xs, ys, zs = _sample(tower9, 1), _sample(tower9, 2), _sample(tower9, 3)
    for x, y, z in zip(xs, ys, zs):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + tower9.zero == x
        assert x * tower9.one == x
        assert x - x == tower9.zero


def test_frobenius_is_a_ring_map(tower5: Tower, tower9: Tower) -> None:
    for tower in (tower5, tower9):
        for x, y in zip(_sample(tower, 4), _sample(tower, 5)):
            assert tower.frobenius(x + y) == tower.frobenius(x) + tower.frobenius(y)
            assert tower.frobenius(x * y) == tower.frobenius(x) * tower.frobenius(y)


def test_frobenius_fixes_exactly_the_base_field(tower7: Tower) -> None:
    fixed = [x for x in tower7.enumerate() if tower7.frobenius(x) == x]

    assert len(fixed) == 7
    assert all(tower7.is_base(x) for x in fixed)
    assert {x.coords for x in fixed} == {tower7.embed(c).coords for c in range(7)}


@pytest.mark.parametrize("d", [1, 3, 19, 57])
def test_mu_elements_for_each_divisor(tower7: Tower, d: int) -> None:
    mu = tower7.mu_elements(d)

    assert len(mu) == d
    assert len({u.coords for u in mu}) == d
    assert all(tower7.in_mu(u, d) for u in mu)


def test_norm_and_mu_under_another_cubic() -> None:
    tower = make_tower(parse_field_spec("5^1::1,2,0,1"))
    e = tower.q * tower.q + tower.q + 1

    for x, y in zip(_sample(tower, 6), _sample(tower, 7)):
        assert tower.embed(tower.norm(x)) == x ** e
        assert tower.embed(tower.norm(x * y)) == tower.embed(tower.norm(x)) * tower.embed(tower.norm(y))
    mu = tower.mu_elements()
    assert len(mu) == 31
    assert all(tower.in_mu(u, 31) for u in mu)
    assert sum(tower.in_mu(x, 31) for x in tower.enumerate()) == 31
