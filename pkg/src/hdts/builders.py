"""Standard small systems: cubes, pure transitions, boundaries, double
transitions, discrete state sets and bare actions.

Cube corners are fixed-width bit strings (``"()"`` for the single corner of
the 0-cube) and the action on axis ``i`` (1-based) is ``"<label>#<i>"``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence

from .model import Action, Hdts, HdtsMap, Transition, make_transition

POINT = "()"


def corner(bits: Iterable[int]) -> str:
    s = "".join(str(b) for b in bits)
    return s or POINT


def zero(n: int) -> str:
    return corner([0] * n)


def one(n: int) -> str:
    return corner([1] * n)


def axis_action(label: str, axis: int) -> str:
    return f"{label}#{axis}"


def _axis_actions(labels: Sequence[str]) -> list[Action]:
    return [Action(axis_action(lab, i), lab) for i, lab in enumerate(labels, start=1)]


def cube_transitions(n: int, labels: Sequence[str]) -> set[Transition]:
    acts = [a.id for a in _axis_actions(labels)]
    out = set()
    for eps in itertools.product((0, 1), repeat=n):
        free = [i for i in range(n) if eps[i] == 0]
        for d in range(1, len(free) + 1):
            for axes in itertools.combinations(free, d):
                tgt = list(eps)
                for i in axes:
                    tgt[i] = 1
                out.add(make_transition(corner(eps), (acts[i] for i in axes), corner(tgt)))
    return out


def cube(n: int, labels: Sequence[str]) -> Hdts:
    labels = list(labels)
    if len(labels) != n:
        raise ValueError(f"cube({n}) needs {n} labels, got {len(labels)}")
    states = frozenset(corner(e) for e in itertools.product((0, 1), repeat=n))
    return Hdts(states, frozenset(_axis_actions(labels)), frozenset(cube_transitions(n, labels)))


def pure_transition(n: int, labels: Sequence[str]) -> Hdts:
    labels = list(labels)
    if len(labels) != n:
        raise ValueError(f"pure_transition({n}) needs {n} labels, got {len(labels)}")
    acts = _axis_actions(labels)
    trans = {make_transition(zero(n), (a.id for a in acts), one(n))} if n else set()
    return Hdts(frozenset({zero(n), one(n)}), frozenset(acts), frozenset(trans))


def boundary(n: int, labels: Sequence[str]) -> Hdts:
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    c = cube(n, labels)
    return Hdts(c.states, c.actions, frozenset(t for t in c.transitions if t.dim < n))


def double_transition(x: str) -> Hdts:
    return Hdts.create(["1", "2", "3", "4"], {x: x}, [("1", [x], "2"), ("3", [x], "4")])


def discrete(states: Iterable[str]) -> Hdts:
    return Hdts(frozenset(states))


def action_only(x: str) -> Hdts:
    return Hdts(actions=frozenset({Action(x, x)}))


def ext_inclusion(n: int, labels: Sequence[str]) -> HdtsMap:
    """The inclusion of the pure n-transition into the n-cube."""
    src, dst = pure_transition(n, labels), cube(n, labels)
    return HdtsMap(src, dst, {s: s for s in src.states}, {a: a for a in src.action_ids})


def action_inclusion(x: str) -> HdtsMap:
    """The inclusion of the bare action ``x`` as the edge of ``cube(1, [x])``."""
    return HdtsMap(action_only(x), cube(1, [x]), {}, {x: axis_action(x, 1)})


def corner_inclusion(n: int, labels: Sequence[str], bits: Iterable[int] | None = None) -> HdtsMap:
    """The inclusion of one corner (default the origin) of ``cube(n, labels)``."""
    c = zero(n) if bits is None else corner(bits)
    return HdtsMap(discrete([c]), cube(n, labels), {c: c}, {})


def fold_map(x: str) -> HdtsMap:
    """``C_1[x] + C_1[x] -> dd{x}`` sending the two edges onto the two edges."""
    from .colim import coproduct

    src, _ = coproduct([cube(1, [x]), cube(1, [x])])
    dst = double_transition(x)
    src_edges = sorted(src.edges)
    state_map = {}
    for t, (a, b) in zip(src_edges, (("1", "2"), ("3", "4"))):
        state_map[t.source] = a
        state_map[t.target] = b
    return HdtsMap(src, dst, state_map, {a: x for a in src.action_ids})


def parallel_pair_map(x: str) -> HdtsMap:
    """``C_1[x] +_{0,1} C_1[x] -> C_1[x]``, the map whose orthogonality is CSA1."""
    from .colim import pushout

    ends = discrete([zero(1), one(1)])
    leg = HdtsMap(ends, cube(1, [x]), {s: s for s in ends.states}, {})
    glued, _, _ = pushout(leg, leg)
    c = cube(1, [x])
    return HdtsMap(glued, c, {s: s for s in glued.states}, {a: axis_action(x, 1) for a in glued.action_ids})
