"""Finite colimits, binary products, images and unions of subobjects.

Colimits are computed the way they are in any topological category over
sets: the states and actions are the set-level colimits and the transitions
are the coherence closure of the union of the images.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass

from scipy.cluster.hierarchy import DisjointSet

from .ids import join_id
from .model import (
    Action,
    Hdts,
    HdtsError,
    HdtsMap,
    PreconditionError,
    Transition,
    coherence_closure,
    is_mono,
    make_transition,
)


@dataclass(frozen=True)
class DiagramSpec:
    objects: tuple[Hdts, ...]
    arrows: tuple[tuple[int, int, HdtsMap], ...] = ()

    def check(self) -> None:
        from .model import validate_map

        for i, j, f in self.arrows:
            if not (0 <= i < len(self.objects) and 0 <= j < len(self.objects)):
                raise PreconditionError(f"arrow {i}->{j} has an index out of range")
            if f.src != self.objects[i] or f.dst != self.objects[j]:
                raise PreconditionError(f"arrow {i}->{j} does not match its objects")
            if not validate_map(f).ok:
                raise PreconditionError(f"arrow {i}->{j} is not a valid map")


def classes(elements: Iterable[Hashable], pairs: Iterable[tuple[Hashable, Hashable]]) -> list[set]:
    ds = DisjointSet(elements)
    for a, b in pairs:
        ds.merge(a, b)
    return [set(s) for s in ds.subsets()]


def _name_classes(groups: list[set[tuple[int, str]]]) -> dict[tuple[int, str], str]:
    """Name each class after its least member id, tagged by origin on clashes."""
    reps = [min(g, key=lambda m: (m[1], m[0])) for g in groups]
    count: dict[str, int] = defaultdict(int)
    for _, ident in reps:
        count[ident] += 1
    names: dict[tuple[int, str], str] = {}
    for g, (idx, ident) in zip(groups, reps):
        name = ident if count[ident] == 1 else join_id(idx, ident)
        for m in g:
            names[m] = name
    return names


def colimit(d: DiagramSpec) -> tuple[Hdts, list[HdtsMap]]:
    d.check()
    objs = d.objects
    st_nodes = [(i, s) for i, x in enumerate(objs) for s in x.states]
    ac_nodes = [(i, a) for i, x in enumerate(objs) for a in x.action_ids]
    st_pairs = [((i, s), (j, f.state_map[s])) for i, j, f in d.arrows for s in f.src.states]
    ac_pairs = [((i, a), (j, f.action_map[a])) for i, j, f in d.arrows for a in f.src.action_ids]
    st_name = _name_classes(classes(st_nodes, st_pairs))
    ac_name = _name_classes(classes(ac_nodes, ac_pairs))

    label: dict[str, str] = {}
    for (i, a), name in ac_name.items():
        lab = objs[i].label_of[a]
        if label.setdefault(name, lab) != lab:
            raise HdtsError(f"action class {name} mixes labels {label[name]} and {lab}")

    cocone_data = []
    images: set[Transition] = set()
    for i, x in enumerate(objs):
        sm = {s: st_name[(i, s)] for s in x.states}
        am = {a: ac_name[(i, a)] for a in x.action_ids}
        cocone_data.append((x, sm, am))
        for t in x.transitions:
            images.add(make_transition(sm[t.source], (am[a] for a in t.actions), sm[t.target]))

    states = frozenset(st_name.values())
    actions = frozenset(Action(n, lab) for n, lab in label.items())
    sigmas = [x.sigma for x in objs if x.sigma is not None]
    sigma = frozenset().union(*sigmas) if sigmas else None
    out = Hdts(states, actions, coherence_closure(states, actions, images), sigma)
    return out, [HdtsMap(x, out, sm, am) for x, sm, am in cocone_data]


def coproduct(parts: Sequence[Hdts]) -> tuple[Hdts, list[HdtsMap]]:
    return colimit(DiagramSpec(tuple(parts)))


def pushout(f: HdtsMap, g: HdtsMap) -> tuple[Hdts, HdtsMap, HdtsMap]:
    if f.src != g.src:
        raise PreconditionError("pushout legs must share their source")
    out, cocone = colimit(DiagramSpec((f.src, f.dst, g.dst), ((0, 1, f), (0, 2, g))))
    return out, cocone[1], cocone[2]


def quotient(
    x: Hdts, state_pairs: Iterable[tuple[str, str]] = (), action_pairs: Iterable[tuple[str, str]] = ()
) -> tuple[Hdts, HdtsMap]:
    """Identify the given states and actions and close under coherence.

    Merged elements are named after their least member.
    """
    st = classes(sorted(x.states), state_pairs)
    ac = classes(sorted(x.action_ids), action_pairs)
    sm = {s: min(g) for g in st for s in g}
    am = {a: min(g) for g in ac for a in g}
    actions = set()
    for a, rep in am.items():
        if x.label_of[a] != x.label_of[rep]:
            raise HdtsError(f"cannot merge actions with labels {x.label_of[a]} and {x.label_of[rep]}")
        actions.add(Action(rep, x.label_of[rep]))
    states = frozenset(sm.values())
    images = {make_transition(sm[t.source], (am[a] for a in t.actions), sm[t.target]) for t in x.transitions}
    out = Hdts(states, frozenset(actions), coherence_closure(states, actions, images), x.sigma)
    return out, HdtsMap(x, out, sm, am)


def pairings(
    left: Sequence[str], right: Sequence[str], lab_left: Mapping[str, str], lab_right: Mapping[str, str]
) -> set[tuple[tuple[str, str], ...]]:
    """Distinct label-respecting perfect matchings between two multisets.

    Each matching is returned as a sorted tuple of ``(u, v)`` pairs.
    """
    if sorted(lab_left[u] for u in left) != sorted(lab_right[v] for v in right):
        return set()
    out: set[tuple[tuple[str, str], ...]] = set()

    def rec(i: int, rest: list[str], acc: list[tuple[str, str]]) -> None:
        if i == len(left):
            out.add(tuple(sorted(acc)))
            return
        u = left[i]
        tried = set()
        for k, v in enumerate(rest):
            if v in tried or lab_right[v] != lab_left[u]:
                continue
            tried.add(v)
            rec(i + 1, rest[:k] + rest[k + 1:], acc + [(u, v)])

    rec(0, list(right), [])
    return out


def product(x: Hdts, y: Hdts) -> tuple[Hdts, HdtsMap, HdtsMap]:
    states = {join_id(a, b): (a, b) for a in x.states for b in y.states}
    acts = {
        join_id(u.id, v.id): (u, v) for u in x.actions for v in y.actions if u.label == v.label
    }
    by_shape: dict[tuple, list[Transition]] = defaultdict(list)
    for t in y.transitions:
        by_shape[y.label_multiset(t.actions)].append(t)
    trans = set()
    for t in x.transitions:
        for t2 in by_shape.get(x.label_multiset(t.actions), ()):
            for match in pairings(t.actions, t2.actions, x.label_of, y.label_of):
                trans.add(
                    make_transition(
                        join_id(t.source, t2.source),
                        (join_id(u, v) for u, v in match),
                        join_id(t.target, t2.target),
                    )
                )
    out = Hdts(
        frozenset(states),
        frozenset(Action(i, u.label) for i, (u, _) in acts.items()),
        frozenset(trans),
    )
    p1 = HdtsMap(out, x, {s: a for s, (a, _) in states.items()}, {i: u.id for i, (u, _) in acts.items()})
    p2 = HdtsMap(out, y, {s: b for s, (_, b) in states.items()}, {i: v.id for i, (_, v) in acts.items()})
    return out, p1, p2


def _sub(x: Hdts, states: Iterable[str], actions: Iterable[str], seed: Iterable[Transition]) -> tuple[Hdts, HdtsMap]:
    states = frozenset(states)
    acts = frozenset(Action(a, x.label_of[a]) for a in actions)
    sub = Hdts(states, acts, coherence_closure(states, acts, seed), x.sigma)
    return sub, HdtsMap(sub, x, {s: s for s in states}, {a.id: a.id for a in acts})


def image(f: HdtsMap) -> tuple[Hdts, HdtsMap]:
    """The image subobject of ``f`` with its inclusion into ``f.dst``."""
    return _sub(
        f.dst,
        f.state_map.values(),
        f.action_map.values(),
        (f.image(t) for t in f.src.transitions),
    )


def union_subobjects(monos: Sequence[HdtsMap], into: Hdts | None = None) -> tuple[Hdts, HdtsMap]:
    if into is None:
        if not monos:
            raise PreconditionError("an empty union needs an explicit ambient system")
        into = monos[0].dst
    for f in monos:
        if not is_mono(f):
            raise PreconditionError("union_subobjects expects monomorphisms")
        if f.dst != into:
            raise PreconditionError("subobjects must share their codomain")
    return _sub(
        into,
        (s for f in monos for s in f.state_map.values()),
        (a for f in monos for a in f.action_map.values()),
        (f.image(t) for f in monos for t in f.src.transitions),
    )


def union_of_images(maps: Sequence[HdtsMap], into: Hdts) -> tuple[Hdts, HdtsMap]:
    """Union of the image subobjects of arbitrary maps into ``into``."""
    return union_subobjects([image(f)[1] for f in maps], into)
