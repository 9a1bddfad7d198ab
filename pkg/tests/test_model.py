import json
import random
from fractions import Fraction

import pytest

from fairdiv import (
    Allocation,
    DimensionMismatch,
    IndexOutOfRange,
    Instance,
    MalformedRational,
    NegativeValue,
    allocation_from_list,
    bundle_utility,
    load_allocation,
    load_instance,
    make_instance,
    parse_rational,
    save_allocation,
    save_instance,
    validate_instance,
)


def test_parse_rational_forms():
    assert parse_rational(3) == Fraction(3)
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("6/110") == Fraction(3, 55)
    assert parse_rational(" 2 ") == Fraction(2)


@pytest.mark.parametrize("bad", ["3/0", "abc", "", None, [1], True, 0.1])
def test_parse_rational_rejects(bad):
    with pytest.raises(MalformedRational):
        parse_rational(bad)


def test_validate_car_instance():
    inst = validate_instance(
        {
            "agents": ["Alice", "Bob", "Carol"],
            "items": ["Renault", "Skoda", "Toyota"],
            "bids": [[1, 8, 3], [8, 7, 1], [18, 1, 8]],
        }
    )
    assert inst.num_agents == 3 and inst.num_items == 3
    assert inst.bids[2][0] == 18
    assert inst.true_utilities is None
    assert inst.agent_label(0) == "Alice"


def test_validate_empty_items():
    inst = validate_instance({"agents": 1, "items": 0, "bids": [[]]})
    assert inst.num_agents == 1 and inst.num_items == 0


def test_validate_zero_denominator():
    with pytest.raises(MalformedRational):
        validate_instance({"agents": 2, "items": 2, "bids": [[1, "3/0"], [1, 1]]})


def test_validate_negative_entry():
    with pytest.raises(NegativeValue):
        validate_instance({"agents": 1, "items": 1, "bids": [[-1]]})


def test_validate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        validate_instance({"agents": 2, "items": 2, "bids": [[1, 2]]})
    with pytest.raises(DimensionMismatch):
        validate_instance({"agents": 2, "items": 2, "bids": [[1, 2], [1]]})
    with pytest.raises(DimensionMismatch):
        validate_instance({"agents": 0, "items": 1, "bids": []})


def test_validate_utilities_matrix():
    inst = validate_instance(
        {
            "agents": 2,
            "items": 2,
            "bids": [["1/2", 3], [1, 1]],
            "utilities": [[1, 2], [3, 1]],
        }
    )
    assert inst.true_utilities[0][1] == 2
    assert inst.values(use_true=True)[0][0] == 1
    assert inst.values(use_true=False)[0][0] == Fraction(1, 2)


def test_bundle_utility_car(car):
    # direct additions as oracle
    assert bundle_utility(car, 0, [1]) == 8
    assert bundle_utility(car, 2, []) == 0
    assert bundle_utility(car, 2, [0, 2]) == 18 + 8


def test_bundle_utility_out_of_range(car):
    with pytest.raises(IndexOutOfRange):
        bundle_utility(car, 3, [0])
    with pytest.raises(IndexOutOfRange):
        bundle_utility(car, 0, [3])


def test_bundle_utility_additive_random():
    rng = random.Random(2024)
    for _ in range(300):
        n, m = rng.randint(1, 4), rng.randint(0, 6)
        inst = make_instance(
            [[Fraction(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)]
        )
        agent = rng.randrange(n)
        items = list(range(m))
        rng.shuffle(items)
        cut = rng.randint(0, m)
        left, right = items[:cut], items[cut:]
        assert bundle_utility(inst, agent, left) + bundle_utility(inst, agent, right) == bundle_utility(inst, agent, items)
        # summing in any order gives the identical canonical value
        assert bundle_utility(inst, agent, reversed(items)) == bundle_utility(inst, agent, items)


def test_instance_round_trip(tmp_path, car):
    path = tmp_path / "car.json"
    save_instance(car, path)
    again = load_instance(path)
    assert again == car


def test_round_trip_with_utilities_and_fractions(tmp_path):
    inst = make_instance(
        [["1/2", "0.75"], [2, 0]],
        utilities=[["2/3", 1], [1, 1]],
    )
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    assert load_instance(path) == inst
    doc = json.loads(path.read_text())
    assert doc["bids"][0][0] == "1/2"
    assert doc["bids"][1][0] == 2


def test_allocation_basics():
    alloc = Allocation((1, None, 0))
    assert len(alloc) == 3
    assert not alloc.is_complete
    assert alloc.bundle(0) == (2,)
    assert alloc.bundle(1) == (0,)
    assert Allocation((0, 1)).is_complete


def test_allocation_file_round_trip(tmp_path, car):
    alloc = allocation_from_list([2, 1, 0])
    path = tmp_path / "alloc.json"
    save_allocation(alloc, path)
    assert load_allocation(path, car) == alloc
    path.write_text("[0, null, 1]")
    partial = load_allocation(path)
    assert partial.owner == (0, None, 1)


def test_allocation_validation(car):
    with pytest.raises(DimensionMismatch):
        Allocation((0, 1)).validate_for(car)
    with pytest.raises(IndexOutOfRange):
        Allocation((0, 1, 5)).validate_for(car)
    with pytest.raises(IndexOutOfRange):
        allocation_from_list([0, "x", 1])


def test_instance_requires_agent():
    with pytest.raises(DimensionMismatch):
        Instance(num_agents=0, num_items=0, bids=())
