"""Cylinder and path objects, the homotopy relation, and the two
weak-equivalence deciders (left-determined and cubification-localized)."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .colim import pairings
from .functors import csa1_map, cts_coreflector, label_collapse_map
from .homsearch import DEFAULT_NODE_CAP, enumerate_homs, is_cubical
from .ids import join_id
from .model import Action, Hdts, HdtsMap, PreconditionError, is_iso_map, make_transition


@dataclass(frozen=True)
class Cylinder:
    object: Hdts
    gamma0: HdtsMap
    gamma1: HdtsMap
    sigma: HdtsMap


def _bit(u: str, eps: int) -> str:
    return join_id(u, eps)


def _mixed(actions: tuple[str, ...], choose) -> set[tuple[str, ...]]:
    return {tuple(sorted(choose(u, e) for u, e in zip(actions, bits)))
            for bits in itertools.product((0, 1), repeat=len(actions))}


def cylinder(x: Hdts) -> Cylinder:
    """``X x V``: same states, every action doubled, every transition
    present under every 0/1 tagging of its actions."""
    acts = frozenset(Action(_bit(a.id, e), a.label) for a in x.actions for e in (0, 1))
    trans = frozenset(
        make_transition(t.source, m, t.target) for t in x.transitions for m in _mixed(t.actions, _bit)
    )
    cyl = Hdts(x.states, acts, trans, x.sigma)
    ident = {s: s for s in x.states}
    g0 = HdtsMap(x, cyl, ident, {a: _bit(a, 0) for a in x.action_ids})
    g1 = HdtsMap(x, cyl, ident, {a: _bit(a, 1) for a in x.action_ids})
    sigma = HdtsMap(cyl, x, ident, {_bit(a, e): a for a in x.action_ids for e in (0, 1)})
    return Cylinder(cyl, g0, g1, sigma)


def path_object_whdts(y: Hdts) -> Hdts:
    """``Y^V`` computed in weak HDTS: actions are equally labelled pairs and a
    multiset of pairs is a transition when all its 2^n mixtures are."""
    acts = frozenset(
        Action(join_id(u.id, v.id), u.label) for u in y.actions for v in y.actions if u.label == v.label
    )
    by_ends: dict[tuple[str, str, int], list] = {}
    for t in y.transitions:
        by_ends.setdefault((t.source, t.target, t.dim), []).append(t)
    trans = set()
    for group in by_ends.values():
        for lo in group:
            for hi in group:
                for match in pairings(lo.actions, hi.actions, y.label_of, y.label_of):
                    ok = all(
                        make_transition(lo.source, (p[e] for p, e in zip(match, bits)), lo.target) in y.transitions
                        for bits in itertools.product((0, 1), repeat=len(match))
                    )
                    if ok:
                        trans.add(make_transition(lo.source, (join_id(u, v) for u, v in match), lo.target))
    return Hdts(y.states, acts, frozenset(trans), y.sigma)


def path_object_cts(y: Hdts) -> Hdts:
    return cts_coreflector(path_object_whdts(y)).object


@dataclass(frozen=True)
class HomotopyWitness:
    H: HdtsMap
    endpoints: tuple[HdtsMap, HdtsMap]


def elementary_homotopy(f: HdtsMap, g: HdtsMap) -> HomotopyWitness | None:
    """The homotopy ``cyl(X) -> Y`` from ``f`` to ``g``, if any.

    Such a homotopy is forced on states (so ``f`` and ``g`` must agree there)
    and on actions, so it only remains to check transitions.
    """
    if f.src != g.src or f.dst != g.dst:
        raise PreconditionError("f and g must be parallel")
    if dict(f.state_map) != dict(g.state_map):
        return None
    y = f.dst
    for t in f.src.transitions:
        for bits in itertools.product((0, 1), repeat=t.dim):
            img = make_transition(
                f.state_map[t.source],
                ((f if e == 0 else g).action_map[a] for a, e in zip(t.actions, bits)),
                f.state_map[t.target],
            )
            if img not in y.transitions:
                return None
    cyl = cylinder(f.src)
    am = {}
    for a in f.src.action_ids:
        am[_bit(a, 0)] = f.action_map[a]
        am[_bit(a, 1)] = g.action_map[a]
    h = HdtsMap(cyl.object, y, dict(f.state_map), am)
    return HomotopyWitness(h, (cyl.gamma0.then(h), cyl.gamma1.then(h)))


def homotopic(f: HdtsMap, g: HdtsMap, node_cap: int = DEFAULT_NODE_CAP) -> bool | None:
    """Whether ``f`` and ``g`` are homotopic; ``None`` when the hom
    enumeration hit its cap and no path was found."""
    if f.same_as(g):
        return True
    if dict(f.state_map) != dict(g.state_map):
        return False
    homs = enumerate_homs(f.src, f.dst, node_cap=node_cap, fixed_states=dict(f.state_map))
    nodes = {h.key(): h for h in homs}
    nodes.setdefault(f.key(), f)
    nodes.setdefault(g.key(), g)
    seen = {f.key()}
    queue = deque([f])
    while queue:
        cur = queue.popleft()
        for k, h in nodes.items():
            if k in seen or elementary_homotopy(cur, h) is None:
                continue
            if k == g.key():
                return True
            seen.add(k)
            queue.append(h)
    return None if homs.truncated else False


def _require_cubical(f: HdtsMap) -> None:
    if not (is_cubical(f.src) and is_cubical(f.dst)):
        raise PreconditionError("weak equivalence deciders need cubical source and target")


def we_left_determined(f: HdtsMap) -> bool:
    """Weak equivalence of the left determined structure: the CSA1
    reflection of ``f`` is an isomorphism."""
    _require_cubical(f)
    return is_iso_map(csa1_map(f))


def we_cub_localized(f: HdtsMap) -> bool:
    """Weak equivalence after localizing at cubification: the label collapse
    of ``f`` is an isomorphism."""
    _require_cubical(f)
    return is_iso_map(label_collapse_map(f))
