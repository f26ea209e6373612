"""Canonical JSON documents for systems, maps, diagrams and witnesses."""

from __future__ import annotations

import json
from collections.abc import Mapping
from typing import Any

from .colim import DiagramSpec
from .model import Action, Hdts, HdtsError, HdtsMap, ValidationError, coherence_closure, make_transition, validate, validate_map

FORMAT_VERSION = 1


class FormatError(HdtsError):
    pass


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _fields(doc: Any, what: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(doc, dict):
        raise FormatError(f"{what} must be a JSON object")
    unknown = set(doc) - required - optional
    if unknown:
        raise FormatError(f"{what}: unknown field(s) {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise FormatError(f"{what}: missing field(s) {sorted(missing)}")
    return doc


def _version(doc: dict, what: str) -> None:
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{what}: unsupported format_version {doc.get('format_version')!r}")


def _str_list(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise FormatError(f"{what} must be a list of strings")
    return value


def _str_map(value: Any, what: str) -> dict[str, str]:
    if not isinstance(value, dict) or not all(isinstance(v, str) for v in value.values()):
        raise FormatError(f"{what} must map strings to strings")
    return dict(value)


def to_document(x: Hdts) -> dict:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if x.sigma is not None:
        doc["sigma"] = sorted(x.sigma)
    doc["states"] = sorted(x.states)
    doc["actions"] = [{"id": a.id, "label": a.label} for a in sorted(x.actions)]
    doc["transitions"] = [
        {"from": t.source, "actions": list(t.actions), "to": t.target} for t in sorted(x.transitions)
    ]
    return doc


def from_document(doc: Any, close: bool = False, check: bool = True, check_closed: bool = True) -> Hdts:
    doc = _fields(doc, "document", {"format_version", "states", "actions", "transitions"}, {"sigma"})
    _version(doc, "document")
    states = _str_list(doc["states"], "states")
    if not isinstance(doc["actions"], list):
        raise FormatError("actions must be a list")
    actions = []
    for a in doc["actions"]:
        a = _fields(a, "action", {"id", "label"})
        if not isinstance(a["id"], str) or not isinstance(a["label"], str):
            raise FormatError("action id and label must be strings")
        actions.append(Action(a["id"], a["label"]))
    if not isinstance(doc["transitions"], list):
        raise FormatError("transitions must be a list")
    trans = []
    for t in doc["transitions"]:
        t = _fields(t, "transition", {"from", "actions", "to"})
        if not isinstance(t["from"], str) or not isinstance(t["to"], str):
            raise FormatError("transition endpoints must be strings")
        trans.append(make_transition(t["from"], _str_list(t["actions"], "transition actions"), t["to"]))
    sigma = None if "sigma" not in doc else frozenset(_str_list(doc["sigma"], "sigma"))
    x = Hdts(frozenset(states), frozenset(actions), frozenset(trans), sigma)
    if len({a.id for a in actions}) != len(actions):
        raise FormatError("duplicate action id")
    if close:
        pre = validate(x, check_closed=False)
        if not pre.ok:
            raise ValidationError(pre)
        x = Hdts(x.states, x.actions, coherence_closure(x.states, x.actions, x.transitions), x.sigma)
    if check:
        report = validate(x, check_closed=check_closed)
        if not report.ok:
            raise ValidationError(report)
    return x


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def serialize(x: Hdts) -> str:
    return dumps(to_document(x))


def parse(text: str, close: bool = False, check: bool = True, check_closed: bool = True) -> Hdts:
    return from_document(_load_json(text), close=close, check=check, check_closed=check_closed)


def map_to_document(f: HdtsMap) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "src": to_document(f.src),
        "dst": to_document(f.dst),
        "state_map": dict(sorted(f.state_map.items())),
        "action_map": dict(sorted(f.action_map.items())),
    }


def map_from_document(doc: Any, **kw) -> HdtsMap:
    doc = _fields(doc, "map", {"format_version", "src", "dst", "state_map", "action_map"})
    _version(doc, "map")
    f = HdtsMap(
        from_document(doc["src"], **kw),
        from_document(doc["dst"], **kw),
        _str_map(doc["state_map"], "state_map"),
        _str_map(doc["action_map"], "action_map"),
    )
    report = validate_map(f)
    if not report.ok:
        raise ValidationError(report)
    return f


def serialize_map(f: HdtsMap) -> str:
    return dumps(map_to_document(f))


def parse_map(text: str, **kw) -> HdtsMap:
    return map_from_document(_load_json(text), **kw)


def diagram_to_document(d: DiagramSpec) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "objects": [to_document(x) for x in d.objects],
        "arrows": [
            {
                "src": i,
                "dst": j,
                "state_map": dict(sorted(f.state_map.items())),
                "action_map": dict(sorted(f.action_map.items())),
            }
            for i, j, f in d.arrows
        ],
    }


def diagram_from_document(doc: Any, **kw) -> DiagramSpec:
    doc = _fields(doc, "diagram", {"format_version", "objects", "arrows"})
    _version(doc, "diagram")
    if not isinstance(doc["objects"], list) or not isinstance(doc["arrows"], list):
        raise FormatError("objects and arrows must be lists")
    objs = tuple(from_document(o, **kw) for o in doc["objects"])
    arrows = []
    for a in doc["arrows"]:
        a = _fields(a, "arrow", {"src", "dst", "state_map", "action_map"})
        i, j = a["src"], a["dst"]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < len(objs) and 0 <= j < len(objs)):
            raise FormatError(f"arrow indices out of range: {i}, {j}")
        f = HdtsMap(objs[i], objs[j], _str_map(a["state_map"], "state_map"), _str_map(a["action_map"], "action_map"))
        report = validate_map(f)
        if not report.ok:
            raise ValidationError(report)
        arrows.append((i, j, f))
    return DiagramSpec(objs, tuple(arrows))


def parse_diagram(text: str, **kw) -> DiagramSpec:
    return diagram_from_document(_load_json(text), **kw)


def relation_to_document(rel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "left": to_document(rel.left),
        "right": to_document(rel.right),
        "pairs": [list(p) for p in sorted(rel.pairs)],
    }


def span_to_document(span) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "apex": to_document(span.apex),
        "left": map_to_document(span.left),
        "right": map_to_document(span.right),
    }


def mapping_items(m: Mapping[str, str]) -> list[tuple[str, str]]:
    return sorted(m.items())
