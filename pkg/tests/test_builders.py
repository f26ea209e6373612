from pathlib import Path

import pytest

from hdts import builders, io
from hdts.homsearch import is_cubical
from hdts.model import check_all_actions_used, check_csa1, check_isa, is_coherence_closed, validate, validate_map

GOLDEN = Path(__file__).parent / "golden"

OBJECTS = {
    "cube0": lambda: builders.cube(0, []),
    "cube1_x": lambda: builders.cube(1, ["x"]),
    "cube2_ab": lambda: builders.cube(2, ["a", "b"]),
    "pure2_ab": lambda: builders.pure_transition(2, ["a", "b"]),
    "boundary2_ab": lambda: builders.boundary(2, ["a", "b"]),
    "dd_x": lambda: builders.double_transition("x"),
    "discrete_pq": lambda: builders.discrete(["p", "q"]),
    "action_x": lambda: builders.action_only("x"),
}
MAPS = {
    "ext2_ab.map": lambda: builders.ext_inclusion(2, ["a", "b"]),
    "px.map": lambda: builders.fold_map("x"),
}


@pytest.mark.parametrize("name", sorted(OBJECTS))
def test_object_golden(name):
    assert io.serialize(OBJECTS[name]()) == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize("name", sorted(MAPS))
def test_map_golden(name):
    assert io.serialize_map(MAPS[name]()) == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize(
    "n, labels, counts",
    [
        (0, [], (1, 0, 0)),
        (1, ["x"], (2, 1, 1)),
        (2, ["a", "b"], (4, 2, 5)),
        (3, ["a", "b", "c"], (8, 3, 19)),
        (2, ["a", "a"], (4, 2, 5)),
    ],
)
def test_cube_counts(n, labels, counts):
    c = builders.cube(n, labels)
    assert (len(c.states), len(c.actions), len(c.transitions)) == counts
    assert validate(c).ok and is_cubical(c)


def test_cube_zero_state_name():
    assert builders.cube(0, []).states == {builders.POINT}


def test_pure_transition():
    p = builders.pure_transition(2, ["a", "b"])
    assert (len(p.states), len(p.actions), len(p.transitions)) == (2, 2, 1)
    assert not check_isa(p)
    assert builders.pure_transition(0, []).states == {builders.POINT}


def test_boundary():
    b2 = builders.boundary(2, ["a", "b"])
    assert (len(b2.states), len(b2.actions), len(b2.transitions)) == (4, 2, 4)
    assert check_isa(b2) and check_all_actions_used(b2) and is_cubical(b2)
    b1 = builders.boundary(1, ["x"])
    assert len(b1.states) == 2 and len(b1.actions) == 1 and not b1.transitions
    assert not is_cubical(b1)


def test_double_transition():
    dd = builders.double_transition("x")
    assert check_csa1(dd) and is_cubical(dd)
    assert len(dd.edges) == 2 and len(dd.actions) == 1


def test_discrete_and_action_only():
    assert is_cubical(builders.discrete(["0", "1"]))
    assert not builders.discrete([]).states
    assert not is_cubical(builders.action_only("x"))


def test_cube_closed_and_labelled_per_axis():
    c = builders.cube(3, ["a", "b", "a"])
    assert is_coherence_closed(c)
    assert {a.id: a.label for a in c.actions} == {"a#1": "a", "b#2": "b", "a#3": "a"}


@pytest.mark.parametrize(
    "f",
    [
        builders.ext_inclusion(3, ["a", "b", "c"]),
        builders.action_inclusion("x"),
        builders.corner_inclusion(2, ["a", "b"]),
        builders.corner_inclusion(2, ["a", "b"], [1, 0]),
        builders.fold_map("x"),
        builders.parallel_pair_map("x"),
    ],
)
def test_standard_maps_are_valid(f):
    assert validate_map(f).ok
