import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from hdts import io
from hdts.builders import cube, double_transition, fold_map
from hdts.colim import DiagramSpec
from hdts.homsearch import is_isomorphic
from hdts.model import ValidationError, coherence_closure, make_transition

from instances import random_coherence_seed, random_whdts


def _doc(**extra):
    d = io.to_document(cube(1, ["x"]))
    d.update(extra)
    return d


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_round_trip(rng):
    x = random_whdts(rng)
    text = io.serialize(x)
    back = io.parse(text)
    assert back == x
    assert io.serialize(back) == text


def test_sigma_round_trip():
    x = cube(1, ["x"])
    x = type(x)(x.states, x.actions, x.transitions, frozenset({"x", "y"}))
    assert io.parse(io.serialize(x)).sigma == {"x", "y"}


def test_syntax_error_reports_position():
    with pytest.raises(io.FormatError, match="line 1, column"):
        io.parse('{"format_version": 1,')


def test_unknown_field_rejected():
    with pytest.raises(io.FormatError, match="unknown field"):
        io.from_document(_doc(extra=1))


def test_unknown_nested_field_rejected():
    d = _doc()
    d["actions"][0]["colour"] = "red"
    with pytest.raises(io.FormatError, match="unknown field"):
        io.from_document(d)


def test_version_gate():
    with pytest.raises(io.FormatError, match="format_version"):
        io.from_document(_doc(format_version=2))


def test_validation_failure_names_rule():
    d = _doc()
    d["transitions"].append({"from": "0", "actions": ["nope"], "to": "1"})
    with pytest.raises(ValidationError, match="unknown-action"):
        io.from_document(d)


def test_close_on_load_gives_closure():
    rng = random.Random(3)
    for _ in range(30):
        states, actions, seed = random_coherence_seed(rng)
        doc = {
            "format_version": 1,
            "states": sorted(states),
            "actions": [{"id": a.id, "label": a.label} for a in sorted(actions)],
            "transitions": [{"from": t.source, "actions": list(t.actions), "to": t.target} for t in sorted(seed)],
        }
        closed = coherence_closure(states, actions, seed)
        assert io.from_document(doc, close=True).transitions == closed
        if closed != seed:
            with pytest.raises(ValidationError, match="not-coherence-closed"):
                io.from_document(doc)
            assert io.from_document(doc, check_closed=False).transitions == seed


def test_output_is_canonical():
    text = io.serialize(cube(2, ["b", "a"]))
    doc = json.loads(text)
    assert doc["states"] == sorted(doc["states"])
    assert [a["id"] for a in doc["actions"]] == sorted(a["id"] for a in doc["actions"])


def test_map_round_trip():
    f = fold_map("x")
    g = io.parse_map(io.serialize_map(f))
    assert g.same_as(f) and g.src == f.src and g.dst == f.dst


def test_map_validation():
    doc = io.map_to_document(fold_map("x"))
    doc["action_map"] = {}
    with pytest.raises(ValidationError, match="action-map-not-total"):
        io.map_from_document(doc)


def test_diagram_round_trip():
    f = fold_map("x")
    d = DiagramSpec((f.src, f.dst), ((0, 1, f),))
    back = io.parse_diagram(io.dumps(io.diagram_to_document(d)))
    assert back.objects == d.objects and back.arrows[0][2].same_as(f)


def test_diagram_bad_index():
    doc = io.diagram_to_document(DiagramSpec((double_transition("x"),)))
    doc["arrows"] = [{"src": 0, "dst": 3, "state_map": {}, "action_map": {}}]
    with pytest.raises(io.FormatError, match="out of range"):
        io.diagram_from_document(doc)


def test_parse_preserves_isomorphism_class():
    x = double_transition("x")
    assert is_isomorphic(io.parse(io.serialize(x)), x) is not None
