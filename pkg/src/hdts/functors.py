"""The cubical coreflector, cubification, the CSA1 reflector and the label
collapse, each returned together with its unit or counit."""

from __future__ import annotations

import random
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

from .colim import classes, quotient
from .homsearch import enumerate_cube_maps, is_cubical
from .ids import join_id
from .model import (
    Action,
    Hdts,
    HdtsError,
    HdtsMap,
    PreconditionError,
    Transition,
    coherence_closure,
    make_transition,
    splits,
)


@dataclass(frozen=True)
class FunctorResult:
    """``structural_map`` is the counit ``object -> X`` for the coreflector
    and cubification, and the unit ``X -> object`` for the two quotients."""

    object: Hdts
    structural_map: HdtsMap
    trace: tuple[tuple, ...] = ()


def replay(x: Hdts, trace: Sequence[tuple]) -> Hdts:
    """Re-apply a restriction or merge trace to ``x``."""
    for step in trace:
        kind = step[0]
        if kind == "merge":
            x, _ = quotient(x, action_pairs=step[1])
        elif kind == "drop-actions":
            dropped = set(step[1])
            x = Hdts(x.states, frozenset(a for a in x.actions if a.id not in dropped), x.transitions, x.sigma)
        elif kind == "drop-transitions":
            x = Hdts(x.states, x.actions, x.transitions - frozenset(step[1]), x.sigma)
        else:
            raise ValueError(f"step {kind!r} cannot be replayed")
    return x


def divisible_transitions(x: Hdts) -> frozenset[Transition]:
    """Transitions that split recursively, through some chain of states,
    down to 1-transitions.

    This set can be strictly larger than the union of the subcubes: a
    transition may split one way without splitting at every position.
    ``cts_coreflector`` therefore does not use it.
    """
    memo: dict[Transition, bool] = {}

    def divisible(t: Transition) -> bool:
        if t.dim == 1:
            return True
        if t in memo:
            return memo[t]
        memo[t] = False
        ok = False
        for b, rest in splits(t.actions):
            for mid in x.succ.get((t.source, b), ()):
                if t.target not in x.succ.get((mid, rest), ()):
                    continue
                if divisible(Transition(t.source, b, mid)) and divisible(Transition(mid, rest, t.target)):
                    ok = True
                    break
            if ok:
                break
        memo[t] = ok
        return ok

    return frozenset(t for t in x.transitions if divisible(t))


def subcube_transitions(x: Hdts) -> frozenset[Transition]:
    """Coherence closure of the images of all cube maps into ``x``."""
    images = set()
    for cm in enumerate_cube_maps(x):
        images.update(cm.map.image(t) for t in cm.map.src.transitions)
    return coherence_closure(x.states, x.actions, images)


def cts_coreflector(x: Hdts) -> FunctorResult:
    """The largest cubical subsystem: the union of the subcubes of ``x``."""
    used = {t.actions[0] for t in x.edges}
    kept = subcube_transitions(x)
    acts = frozenset(a for a in x.actions if a.id in used)
    out = Hdts(x.states, acts, kept, x.sigma)
    counit = HdtsMap(out, x, {s: s for s in x.states}, {a.id: a.id for a in acts})
    trace = (
        ("drop-actions", tuple(sorted(x.action_ids - used))),
        ("drop-transitions", tuple(sorted(x.transitions - kept))),
    )
    return FunctorResult(out, counit, trace)


def coreflect_map(f: HdtsMap) -> HdtsMap:
    """The coreflector on maps: restrict ``f`` to the cubical parts."""
    rx, ry = cts_coreflector(f.src).object, cts_coreflector(f.dst).object
    return HdtsMap(rx, ry, dict(f.state_map), {a: f.action_map[a] for a in rx.action_ids})


def cubification(x: Hdts) -> FunctorResult:
    """Colimit of all cubes of ``x``.

    Its actions are the 1-transitions of ``x`` up to the equivalence that
    glues the parallel edges along one axis of a single cube.
    """
    cubes = enumerate_cube_maps(x)
    edges = list(x.edges)
    pairs = []
    axis_edges: list[list[list[Transition]]] = []
    for cm in cubes:
        f = cm.map
        per_axis: list[list[Transition]] = [[] for _ in range(cm.n)]
        for t in f.src.transitions:
            if t.dim == 1:
                axis = int(t.actions[0].rsplit("#", 1)[1]) - 1
                per_axis[axis].append(f.image(t))
        for group in per_axis:
            pairs.extend((group[0], e) for e in group[1:])
        axis_edges.append(per_axis)
    groups = classes(edges, pairs)

    by_action: dict[str, list[list[Transition]]] = defaultdict(list)
    for g in groups:
        by_action[next(iter(g)).actions[0]].append(sorted(g))
    name_of: dict[Transition, str] = {}
    under: dict[str, str] = {}
    trace = []
    for u, gs in sorted(by_action.items()):
        for g in sorted(gs):
            name = u if len(gs) == 1 else join_id(u, g[0].source, g[0].target)
            under[name] = u
            trace.append(("class", name, tuple(g)))
            for e in g:
                name_of[e] = name

    images = set()
    for cm, per_axis in zip(cubes, axis_edges):
        f = cm.map
        axis_name = [name_of[group[0]] for group in per_axis]
        for t in f.src.transitions:
            axes = [int(a.rsplit("#", 1)[1]) - 1 for a in t.actions]
            images.add(
                make_transition(f.state_map[t.source], (axis_name[i] for i in axes), f.state_map[t.target])
            )
    acts = frozenset(Action(n, x.label_of[u]) for n, u in under.items())
    out = Hdts(x.states, acts, coherence_closure(x.states, acts, images), x.sigma)
    counit = HdtsMap(out, x, {s: s for s in x.states}, under)
    return FunctorResult(out, counit, tuple(trace))


def _parallel_groups(x: Hdts) -> list[list[str]]:
    groups: dict[tuple[str, str, str], set[str]] = defaultdict(set)
    for t in x.edges:
        u = t.actions[0]
        groups[(t.source, t.target, x.label_of[u])].add(u)
    return [sorted(g) for _, g in sorted(groups.items()) if len(g) > 1]


def csa1_reflector(x: Hdts, rng: random.Random | None = None) -> FunctorResult:
    """Merge equally labelled parallel actions until CSA1 holds.

    With ``rng`` one randomly chosen pair is merged per step instead of all
    candidates at once; the result does not depend on the order.
    """
    current, unit = x, HdtsMap.identity(x)
    trace = []
    while True:
        groups = _parallel_groups(current)
        if not groups:
            break
        if rng is None:
            merge = tuple((g[0], u) for g in groups for u in g[1:])
        else:
            g = rng.choice(groups)
            merge = (tuple(rng.sample(g, 2)),)
        current, step = quotient(current, action_pairs=merge)
        unit = unit.then(step)
        trace.append(("merge", merge))
    return FunctorResult(current, unit, tuple(trace))


def _induced(f: HdtsMap, ux: HdtsMap, uy: HdtsMap) -> HdtsMap:
    """The map ``ux.dst -> uy.dst`` through which ``uy . f`` factors along ``ux``."""
    sm: dict[str, str] = {}
    am: dict[str, str] = {}
    for s in f.src.states:
        img = uy.state_map[f.state_map[s]]
        if sm.setdefault(ux.state_map[s], img) != img:
            raise HdtsError("induced map is not well defined on states")
    for a in f.src.action_ids:
        img = uy.action_map[f.action_map[a]]
        if am.setdefault(ux.action_map[a], img) != img:
            raise HdtsError("induced map is not well defined on actions")
    return HdtsMap(ux.dst, uy.dst, sm, am)


def csa1_map(f: HdtsMap) -> HdtsMap:
    return _induced(f, csa1_reflector(f.src).structural_map, csa1_reflector(f.dst).structural_map)


def label_collapse(x: Hdts, rng: random.Random | None = None) -> FunctorResult:
    """Merge all equally labelled actions of a cubical system."""
    if not is_cubical(x):
        raise PreconditionError("label_collapse needs a cubical system")
    by_label: dict[str, list[str]] = defaultdict(list)
    for a in sorted(x.actions):
        by_label[a.label].append(a.id)
    merge = [(ids[0], u) for _, ids in sorted(by_label.items()) for u in ids[1:]]
    if rng is None:
        out, unit = quotient(x, action_pairs=merge)
        trace = (("merge", tuple(merge)),) if merge else ()
        return FunctorResult(out, unit, trace)
    current, unit = x, HdtsMap.identity(x)
    steps = []
    pending = [(u, v) for ids in by_label.values() for u in ids for v in ids if u < v]
    rng.shuffle(pending)
    for u, v in pending:
        a, b = unit.action_map[u], unit.action_map[v]
        if a == b:
            continue
        current, step = quotient(current, action_pairs=[(a, b)])
        unit = unit.then(step)
        steps.append(("merge", ((a, b),)))
    return FunctorResult(current, unit, tuple(steps))


def label_collapse_map(f: HdtsMap) -> HdtsMap:
    return _induced(f, label_collapse(f.src).structural_map, label_collapse(f.dst).structural_map)
