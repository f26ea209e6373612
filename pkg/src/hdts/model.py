"""Finite weak higher dimensional transition systems and their maps.

A transition ``(alpha, u_1, ..., u_n, beta)`` is stored once per permutation
orbit, as a :class:`Transition` whose action tuple is sorted.  Permutation
closure is therefore structural; only the Coherence axiom has to be enforced
by :func:`coherence_closure`.
"""

from __future__ import annotations

import functools
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

DEFAULT_DIM_CAP = 8


class HdtsError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(HdtsError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        rules = ", ".join(sorted({rule for rule, _ in report.violations}))
        super().__init__(f"validation failed: {rules}")


class PreconditionError(HdtsError):
    pass


@dataclass(frozen=True, order=True)
class Action:
    id: str
    label: str


class Transition(NamedTuple):
    source: str
    actions: tuple[str, ...]
    target: str

    @property
    def dim(self) -> int:
        return len(self.actions)


def make_transition(source: str, actions: Iterable[str], target: str) -> Transition:
    return Transition(source, tuple(sorted(actions)), target)


@functools.lru_cache(maxsize=65536)
def splits(actions: tuple[str, ...]) -> tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]:
    """All ways to write a sorted multiset as ``B + C`` with B and C nonempty.

    Each distinct pair of sub-multisets appears once; both halves are sorted.
    """
    counts = sorted(Counter(actions).items())
    out: list[tuple[tuple[str, ...], tuple[str, ...]]] = []

    def rec(i: int, left: list[str], right: list[str]) -> None:
        if i == len(counts):
            if left and right:
                out.append((tuple(left), tuple(right)))
            return
        item, c = counts[i]
        for k in range(c + 1):
            rec(i + 1, left + [item] * k, right + [item] * (c - k))

    rec(0, [], [])
    return tuple(out)


@dataclass(frozen=True)
class Hdts:
    """A finite weak HDTS.

    ``sigma`` is the declared label universe; when ``None`` it defaults to the
    labels carried by the actions.
    """

    states: frozenset[str] = frozenset()
    actions: frozenset[Action] = frozenset()
    transitions: frozenset[Transition] = frozenset()
    sigma: frozenset[str] | None = None

    @classmethod
    def create(
        cls,
        states: Iterable[str] = (),
        actions: Mapping[str, str] | Iterable[Action] = (),
        transitions: Iterable[tuple[str, Iterable[str], str]] = (),
        sigma: Iterable[str] | None = None,
        close: bool = False,
    ) -> "Hdts":
        if isinstance(actions, Mapping):
            acts = frozenset(Action(i, lab) for i, lab in actions.items())
        else:
            acts = frozenset(actions)
        trans = frozenset(make_transition(s, a, t) for s, a, t in transitions)
        states = frozenset(states)
        if close:
            trans = coherence_closure(states, acts, trans)
        return cls(states, acts, trans, None if sigma is None else frozenset(sigma))

    @cached_property
    def label_of(self) -> dict[str, str]:
        return {a.id: a.label for a in self.actions}

    @cached_property
    def action_ids(self) -> frozenset[str]:
        return frozenset(self.label_of)

    @property
    def labels(self) -> frozenset[str]:
        if self.sigma is not None:
            return self.sigma
        return frozenset(self.label_of.values())

    @cached_property
    def succ(self) -> dict[tuple[str, tuple[str, ...]], frozenset[str]]:
        """``(source, actions) -> targets``."""
        idx: dict[tuple[str, tuple[str, ...]], set[str]] = defaultdict(set)
        for t in self.transitions:
            idx[(t.source, t.actions)].add(t.target)
        return {k: frozenset(v) for k, v in idx.items()}

    @cached_property
    def edges(self) -> tuple[Transition, ...]:
        return tuple(sorted(t for t in self.transitions if t.dim == 1))

    @cached_property
    def max_dim(self) -> int:
        return max((t.dim for t in self.transitions), default=0)

    def label_multiset(self, actions: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(self.label_of[a] for a in actions))

    def sorted_states(self) -> list[str]:
        return sorted(self.states)

    def sorted_actions(self) -> list[Action]:
        return sorted(self.actions)

    def __repr__(self) -> str:
        return (
            f"Hdts(states={len(self.states)}, actions={len(self.actions)}, "
            f"transitions={len(self.transitions)})"
        )


EMPTY = Hdts()


@dataclass(frozen=True)
class HdtsMap:
    src: Hdts
    dst: Hdts
    state_map: Mapping[str, str]
    action_map: Mapping[str, str]

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        return (tuple(sorted(self.state_map.items())), tuple(sorted(self.action_map.items())))

    def image(self, t: Transition) -> Transition:
        return make_transition(
            self.state_map[t.source], (self.action_map[a] for a in t.actions), self.state_map[t.target]
        )

    def then(self, g: "HdtsMap") -> "HdtsMap":
        """The composite ``g . self``."""
        return HdtsMap(
            self.src,
            g.dst,
            {s: g.state_map[v] for s, v in self.state_map.items()},
            {a: g.action_map[v] for a, v in self.action_map.items()},
        )

    @classmethod
    def identity(cls, x: Hdts) -> "HdtsMap":
        return cls(x, x, {s: s for s in x.states}, {a: a for a in x.action_ids})

    def same_as(self, other: "HdtsMap") -> bool:
        return self.key() == other.key()

    def __repr__(self) -> str:
        return f"HdtsMap({self.src!r} -> {self.dst!r})"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, object], ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def rules(self) -> set[str]:
        return {rule for rule, _ in self.violations}


def coherence_closure(
    states: Iterable[str], actions: Iterable[Action] | Iterable[str], seed: Iterable[Transition]
) -> frozenset[Transition]:
    """Least superset of ``seed`` closed under the Coherence axiom.

    Multiset form: whenever ``(a, B+C+D, b)``, ``(a, B, n1)``, ``(n1, C+D, b)``,
    ``(a, B+C, n2)`` and ``(n2, D, b)`` are present with B, C, D nonempty,
    ``(n1, C, n2)`` is added.
    """
    states = set(states)
    ids = {a.id if isinstance(a, Action) else a for a in actions}
    trans = set(seed)
    for t in trans:
        if t.source not in states or t.target not in states:
            raise PreconditionError(f"transition {t} references an unknown state")
        if any(a not in ids for a in t.actions):
            raise PreconditionError(f"transition {t} references an unknown action")

    succ: dict[tuple[str, tuple[str, ...]], set[str]] = defaultdict(set)
    for t in trans:
        succ[(t.source, t.actions)].add(t.target)

    pending = [t for t in trans if t.dim >= 3]
    while pending:
        fresh: list[Transition] = []
        # a new low-dimensional transition can enable any high one, so rescan all
        for t in sorted(u for u in trans if u.dim >= 3):
            for new in _coherence_step(t, succ):
                if new not in trans:
                    trans.add(new)
                    succ[(new.source, new.actions)].add(new.target)
                    fresh.append(new)
        pending = fresh
    return frozenset(trans)


def _middles(t: Transition, succ) -> dict[tuple[str, ...], set[str]]:
    alpha, beta = t.source, t.target
    mids: dict[tuple[str, ...], set[str]] = {}
    for b, rest in splits(t.actions):
        nus = {nu for nu in succ.get((alpha, b), ()) if beta in succ.get((nu, rest), ())}
        if nus:
            mids[b] = nus
    return mids


def _coherence_step(t: Transition, succ) -> Iterable[Transition]:
    mids = _middles(t, succ)
    if len(mids) < 2:
        return
    for b, rest in splits(t.actions):
        first = mids.get(b)
        if not first:
            continue
        for c, _d in splits(rest):
            second = mids.get(tuple(sorted(b + c)))
            if not second:
                continue
            for nu1 in first:
                for nu2 in second:
                    yield Transition(nu1, c, nu2)


def is_coherence_closed(x: Hdts) -> bool:
    succ = {k: set(v) for k, v in x.succ.items()}
    for t in x.transitions:
        if t.dim >= 3:
            for new in _coherence_step(t, succ):
                if new not in x.transitions:
                    return False
    return True


def _valid_label(text: object) -> bool:
    return isinstance(text, str) and bool(text) and text.isprintable() and not any(c.isspace() for c in text)


def validate(x: Hdts, dim_cap: int = DEFAULT_DIM_CAP, check_closed: bool = True) -> ValidationReport:
    v: list[tuple[str, object]] = []
    ids: dict[str, str] = {}
    for a in sorted(x.actions):
        if a.id in ids:
            v.append(("duplicate-action", a.id))
        ids[a.id] = a.label
        if not _valid_label(a.label):
            v.append(("invalid-label", a.label))
        if x.sigma is not None and a.label not in x.sigma:
            v.append(("label-not-in-sigma", a.label))
    for s in sorted(x.states):
        if not isinstance(s, str):
            v.append(("invalid-state", s))
    for t in sorted(x.transitions):
        if t.dim == 0:
            v.append(("empty-transition", t))
            continue
        if t.dim > dim_cap:
            v.append(("dimension-cap", t))
        if tuple(sorted(t.actions)) != t.actions:
            v.append(("non-canonical-transition", t))
        if t.source not in x.states:
            v.append(("unknown-state", t.source))
        if t.target not in x.states:
            v.append(("unknown-state", t.target))
        for a in t.actions:
            if a not in ids:
                v.append(("unknown-action", a))
    if check_closed and not v and not is_coherence_closed(x):
        closed = coherence_closure(x.states, x.actions, x.transitions)
        for t in sorted(closed - x.transitions):
            v.append(("not-coherence-closed", t))
    return ValidationReport(tuple(v))


def validate_map(f: HdtsMap) -> ValidationReport:
    v: list[tuple[str, object]] = []
    src, dst = f.src, f.dst
    for s in sorted(src.states):
        if s not in f.state_map:
            v.append(("state-map-not-total", s))
        elif f.state_map[s] not in dst.states:
            v.append(("unknown-state", f.state_map[s]))
    for a in sorted(src.action_ids):
        if a not in f.action_map:
            v.append(("action-map-not-total", a))
        elif f.action_map[a] not in dst.action_ids:
            v.append(("unknown-action", f.action_map[a]))
        elif dst.label_of[f.action_map[a]] != src.label_of[a]:
            v.append(("label-preservation", a))
    extra = (set(f.state_map) - src.states) | (set(f.action_map) - src.action_ids)
    for k in sorted(extra):
        v.append(("unknown-domain-element", k))
    if not v:
        for t in sorted(src.transitions):
            if f.image(t) not in dst.transitions:
                v.append(("transition-preservation", t))
    return ValidationReport(tuple(v))


def _injective(m: Mapping[str, str]) -> bool:
    return len(set(m.values())) == len(m)


def is_mono(f: HdtsMap) -> bool:
    return _injective(f.state_map) and _injective(f.action_map)


def is_cofibration(f: HdtsMap) -> bool:
    return _injective(f.action_map)


def is_iso_map(f: HdtsMap) -> bool:
    """Bijective on states and actions, and onto on transitions."""
    if not is_mono(f):
        return False
    if len(f.src.states) != len(f.dst.states) or len(f.src.actions) != len(f.dst.actions):
        return False
    return {f.image(t) for t in f.src.transitions} == set(f.dst.transitions)


def check_isa(x: Hdts) -> bool:
    for t in x.transitions:
        if t.dim < 2:
            continue
        for b, rest in splits(t.actions):
            if not any(t.target in x.succ.get((nu, rest), ()) for nu in x.succ.get((t.source, b), ())):
                return False
    return True


def check_csa2(x: Hdts) -> bool:
    for t in x.transitions:
        if t.dim < 2:
            continue
        for b, rest in splits(t.actions):
            witnesses = [nu for nu in x.succ.get((t.source, b), ()) if t.target in x.succ.get((nu, rest), ())]
            if len(witnesses) > 1:
                return False
    return True


def check_all_actions_used(x: Hdts) -> bool:
    used = {t.actions[0] for t in x.edges}
    return used >= x.action_ids


def check_csa1(x: Hdts) -> bool:
    seen: dict[tuple[str, str, str], str] = {}
    for t in x.edges:
        u = t.actions[0]
        k = (t.source, t.target, x.label_of[u])
        if seen.setdefault(k, u) != u:
            return False
    return True
