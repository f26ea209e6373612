"""Hom enumeration by backtracking, lifting problems, isomorphism testing
and enumeration of the cubes of a system."""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .builders import action_inclusion, axis_action, corner, cube, ext_inclusion
from .model import (
    Hdts,
    HdtsError,
    HdtsMap,
    PreconditionError,
    check_all_actions_used,
    check_isa,
)

DEFAULT_NODE_CAP = 10**6


class SearchCapExceeded(HdtsError):
    """A search ran out of its node budget before reaching a verdict."""


@dataclass
class HomSet:
    maps: list[HdtsMap] = field(default_factory=list)
    truncated: bool = False

    def __iter__(self) -> Iterator[HdtsMap]:
        return iter(self.maps)

    def __len__(self) -> int:
        return len(self.maps)


class _Backtrack:
    def __init__(
        self,
        x: Hdts,
        y: Hdts,
        *,
        fixed_states: Mapping[str, str] | None = None,
        fixed_actions: Mapping[str, str] | None = None,
        state_ok: Callable[[str, str], bool] | None = None,
        action_ok: Callable[[str, str], bool] | None = None,
        injective: bool = False,
        node_cap: int = DEFAULT_NODE_CAP,
    ):
        self.x, self.y = x, y
        self.injective = injective
        self.node_cap = node_cap
        self.nodes = 0
        self.truncated = False

        order: list[tuple[str, str]] = []
        seen: set[tuple[str, str]] = set()

        def add(var: tuple[str, str]) -> None:
            if var not in seen:
                seen.add(var)
                order.append(var)

        for t in sorted(x.transitions, key=lambda t: (t.dim, t)):
            add(("s", t.source))
            for a in t.actions:
                add(("a", a))
            add(("s", t.target))
        for s in sorted(x.states):
            add(("s", s))
        for a in sorted(x.action_ids):
            add(("a", a))
        self.order = order
        pos = {v: k for k, v in enumerate(order)}
        self.checks: list[list] = [[] for _ in order]
        for t in x.transitions:
            last = max(pos[("s", t.source)], pos[("s", t.target)], *(pos[("a", a)] for a in t.actions))
            self.checks[last].append(t)

        fixed_states = fixed_states or {}
        fixed_actions = fixed_actions or {}
        y_states = sorted(y.states)
        by_label: dict[str, list[str]] = {}
        for a in sorted(y.action_ids):
            by_label.setdefault(y.label_of[a], []).append(a)
        self.domains: list[list[str]] = []
        for kind, v in order:
            if kind == "s":
                dom = [fixed_states[v]] if v in fixed_states else y_states
                if state_ok is not None:
                    dom = [c for c in dom if state_ok(v, c)]
                dom = [c for c in dom if c in y.states]
            else:
                cands = by_label.get(x.label_of[v], [])
                dom = [fixed_actions[v]] if v in fixed_actions else cands
                if action_ok is not None:
                    dom = [c for c in dom if action_ok(v, c)]
                dom = [c for c in dom if c in y.label_of and y.label_of[c] == x.label_of[v]]
            self.domains.append(dom)

    def run(self) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
        sm: dict[str, str] = {}
        am: dict[str, str] = {}
        used_s: set[str] = set()
        used_a: set[str] = set()
        yt = self.y.transitions
        order, domains, checks = self.order, self.domains, self.checks
        n = len(order)

        def image_ok(k: int) -> bool:
            for t in checks[k]:
                key = (sm[t.source], tuple(sorted(am[a] for a in t.actions)), sm[t.target])
                if key not in yt:
                    return False
            return True

        def rec(k: int) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
            if k == n:
                yield dict(sm), dict(am)
                return
            kind, v = order[k]
            target, used = (sm, used_s) if kind == "s" else (am, used_a)
            for c in domains[k]:
                if self.truncated:
                    return
                self.nodes += 1
                if self.nodes > self.node_cap:
                    self.truncated = True
                    return
                if self.injective and c in used:
                    continue
                target[v] = c
                if self.injective:
                    used.add(c)
                if image_ok(k):
                    yield from rec(k + 1)
                if self.injective:
                    used.discard(c)
                del target[v]

        if all(domains):
            yield from rec(0)


def iter_homs(x: Hdts, y: Hdts, **kw) -> Iterator[HdtsMap]:
    bt = _Backtrack(x, y, **kw)
    for sm, am in bt.run():
        yield HdtsMap(x, y, sm, am)
    if bt.truncated:
        raise SearchCapExceeded(f"hom search exceeded {bt.node_cap} nodes")


def enumerate_homs(
    x: Hdts, y: Hdts, limit: int | None = None, node_cap: int = DEFAULT_NODE_CAP, **kw
) -> HomSet:
    """All maps ``x -> y`` in a deterministic order.

    The result is flagged ``truncated`` when either ``limit`` results were
    collected with more possibly remaining, or the node budget ran out.
    """
    bt = _Backtrack(x, y, node_cap=node_cap, **kw)
    out = HomSet()
    for sm, am in bt.run():
        if limit is not None and len(out.maps) >= limit:
            out.truncated = True
            break
        out.maps.append(HdtsMap(x, y, sm, am))
    out.truncated = out.truncated or bt.truncated
    return out


@dataclass(frozen=True)
class LiftingSquare:
    """``top: A -> X``, ``i: A -> B``, and either ``p: X -> Y`` with
    ``bottom: B -> Y``, or neither (the lifting problem against ``X -> 1``)."""

    i: HdtsMap
    top: HdtsMap
    p: HdtsMap | None = None
    bottom: HdtsMap | None = None

    def check(self) -> None:
        i, top, p, bottom = self.i, self.top, self.p, self.bottom
        if i.src != top.src:
            raise PreconditionError("i and top must share their source")
        if (p is None) != (bottom is None):
            raise PreconditionError("p and bottom come together")
        if p is None:
            return
        if top.dst != p.src or i.dst != bottom.src or p.dst != bottom.dst:
            raise PreconditionError("square objects do not match")
        for s in i.src.states:
            if p.state_map[top.state_map[s]] != bottom.state_map[i.state_map[s]]:
                raise PreconditionError("square does not commute on states")
        for a in i.src.action_ids:
            if p.action_map[top.action_map[a]] != bottom.action_map[i.action_map[a]]:
                raise PreconditionError("square does not commute on actions")


def iter_lifts(square: LiftingSquare, node_cap: int = DEFAULT_NODE_CAP) -> Iterator[HdtsMap]:
    square.check()
    i, top, p, bottom = square.i, square.top, square.p, square.bottom
    fixed_s: dict[str, str] = {}
    fixed_a: dict[str, str] = {}
    for s in i.src.states:
        if fixed_s.setdefault(i.state_map[s], top.state_map[s]) != top.state_map[s]:
            return
    for a in i.src.action_ids:
        if fixed_a.setdefault(i.action_map[a], top.action_map[a]) != top.action_map[a]:
            return
    state_ok = action_ok = None
    if p is not None:
        state_ok = lambda b, c: p.state_map[c] == bottom.state_map[b]  # noqa: E731
        action_ok = lambda b, c: p.action_map[c] == bottom.action_map[b]  # noqa: E731
    yield from iter_homs(
        i.dst,
        top.dst,
        fixed_states=fixed_s,
        fixed_actions=fixed_a,
        state_ok=state_ok,
        action_ok=action_ok,
        node_cap=node_cap,
    )


def exists_lift(square: LiftingSquare, node_cap: int = DEFAULT_NODE_CAP) -> HdtsMap | None:
    return next(iter_lifts(square, node_cap), None)


def is_injective_wrt(x: Hdts, f: HdtsMap, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Every map ``f.src -> x`` extends along ``f``."""
    for g in iter_homs(f.src, x, node_cap=node_cap):
        if exists_lift(LiftingSquare(f, g), node_cap) is None:
            return False
    return True


def is_orthogonal_wrt(x: Hdts, f: HdtsMap, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Every map ``f.src -> x`` extends along ``f`` in exactly one way."""
    for g in iter_homs(f.src, x, node_cap=node_cap):
        lifts = itertools.islice(iter_lifts(LiftingSquare(f, g), node_cap), 2)
        if sum(1 for _ in lifts) != 1:
            return False
    return True


def _state_signature(x: Hdts, s: str) -> tuple:
    out = Counter((t.dim, x.label_multiset(t.actions)) for t in x.transitions if t.source == s)
    inc = Counter((t.dim, x.label_multiset(t.actions)) for t in x.transitions if t.target == s)
    return tuple(sorted(out.items())), tuple(sorted(inc.items()))


def _action_signature(x: Hdts, a: str) -> tuple:
    occ = Counter((t.dim, t.actions.count(a)) for t in x.transitions if a in t.actions)
    return x.label_of[a], tuple(sorted(occ.items()))


def _global_invariants(x: Hdts) -> tuple:
    return (
        len(x.states),
        len(x.transitions),
        tuple(sorted(Counter(x.label_of.values()).items())),
        tuple(sorted(Counter((t.dim, x.label_multiset(t.actions)) for t in x.transitions).items())),
    )


def is_isomorphic(x: Hdts, y: Hdts, node_cap: int = DEFAULT_NODE_CAP) -> HdtsMap | None:
    """An isomorphism ``x -> y`` if there is one."""
    if _global_invariants(x) != _global_invariants(y):
        return None
    sx = {s: _state_signature(x, s) for s in x.states}
    sy = {s: _state_signature(y, s) for s in y.states}
    ax = {a: _action_signature(x, a) for a in x.action_ids}
    ay = {a: _action_signature(y, a) for a in y.action_ids}
    if sorted(sx.values()) != sorted(sy.values()) or sorted(ax.values()) != sorted(ay.values()):
        return None
    # injective on states and actions with equally many transitions is bijective on transitions
    return next(
        iter_homs(
            x,
            y,
            state_ok=lambda s, c: sx[s] == sy[c],
            action_ok=lambda a, c: ax[a] == ay[c],
            injective=True,
            node_cap=node_cap,
        ),
        None,
    )


class CubeMap(NamedTuple):
    n: int
    labels: tuple[str, ...]
    map: HdtsMap


def _distinct_orderings(actions: tuple[str, ...]) -> list[tuple[str, ...]]:
    return sorted(set(itertools.permutations(actions)))


def enumerate_cube_maps(x: Hdts, max_dim: int | None = None) -> list[CubeMap]:
    """Every map from a cube into ``x``.

    A map ``C_n -> x`` sends the top transition to an n-transition of ``x``;
    given that, a corner ``e`` may go to any state ``v`` with
    ``(f(0), f(axes of e), v)`` and ``(v, f(other axes), f(1))`` transitions,
    and those choices are independent of each other.
    """
    top = x.max_dim if max_dim is None else min(max_dim, x.max_dim)
    out = [CubeMap(0, (), HdtsMap(cube(0, []), x, {corner([]): s}, {})) for s in sorted(x.states)]
    cubes: dict[tuple[str, ...], Hdts] = {}
    for n in range(1, top + 1):
        corners = list(itertools.product((0, 1), repeat=n))
        inner = [e for e in corners if 0 < sum(e) < n]
        for t in sorted(u for u in x.transitions if u.dim == n):
            for ordered in _distinct_orderings(t.actions):
                labels = tuple(x.label_of[a] for a in ordered)
                c = cubes.get(labels)
                if c is None:
                    c = cubes[labels] = cube(n, labels)
                choices = []
                for e in inner:
                    low = tuple(sorted(ordered[i] for i in range(n) if e[i]))
                    high = tuple(sorted(ordered[i] for i in range(n) if not e[i]))
                    cands = sorted(
                        v for v in x.succ.get((t.source, low), ()) if t.target in x.succ.get((v, high), ())
                    )
                    choices.append(cands)
                am = {axis_action(lab, i + 1): ordered[i] for i, lab in enumerate(labels)}
                for pick in itertools.product(*choices):
                    sm = {corner([0] * n): t.source, corner([1] * n): t.target}
                    sm.update({corner(e): v for e, v in zip(inner, pick)})
                    out.append(CubeMap(n, labels, HdtsMap(c, x, sm, am)))
    return out


def is_cubical(x: Hdts) -> bool:
    return check_isa(x) and check_all_actions_used(x)


def cubical_generators(x: Hdts) -> list[HdtsMap]:
    """The inclusions ``C_n^ext -> C_n`` and ``x -> C_1[x]`` that can see ``x``.

    Labels outside ``x`` admit no maps into ``x``, so only multisets of the
    labels of ``x`` up to its top dimension matter.
    """
    labels = sorted(set(x.label_of.values()))
    gens = [action_inclusion(lab) for lab in labels]
    for n in range(2, x.max_dim + 1):
        for combo in itertools.combinations_with_replacement(labels, n):
            gens.append(ext_inclusion(n, combo))
    return gens


def is_cubical_by_injectivity(x: Hdts) -> bool:
    return all(is_injective_wrt(x, g) for g in cubical_generators(x))
