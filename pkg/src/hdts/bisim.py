"""Open maps with respect to sets of cube-shaped paths, and bisimilarity."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .builders import corner_inclusion, cube, zero
from .colim import product
from .functors import cts_coreflector
from .homsearch import LiftingSquare, exists_lift, iter_homs
from .ids import join_id
from .model import Hdts, HdtsMap

TOTAL = "total"
LITERAL = "literal"


@dataclass(frozen=True)
class PathSet:
    paths: tuple[tuple[int, tuple[str, ...]], ...]

    def __post_init__(self):
        for n, labels in self.paths:
            if n < 0 or len(labels) != n:
                raise ValueError(f"bad path descriptor {(n, labels)}")

    @classmethod
    def edges(cls, labels: Iterable[str]) -> "PathSet":
        """All 1-cubes over ``labels``."""
        return cls(tuple((1, (x,)) for x in sorted(set(labels))))


@dataclass(frozen=True)
class Relation:
    left: Hdts
    right: Hdts
    pairs: frozenset[tuple[str, str]]

    def left_total(self) -> bool:
        return {a for a, _ in self.pairs} == set(self.left.states)

    def right_total(self) -> bool:
        return {b for _, b in self.pairs} == set(self.right.states)


@dataclass(frozen=True)
class Span:
    apex: Hdts
    left: HdtsMap
    right: HdtsMap


def is_open(f: HdtsMap, paths: PathSet) -> bool:
    """``f`` has the right lifting property against every ``{0_n} -> P``."""
    x = f.src
    for n, labels in paths.paths:
        path = cube(n, labels)
        origin = zero(n)
        inc = corner_inclusion(n, labels)
        for d in iter_homs(path, f.dst):
            start = d.state_map[origin]
            for alpha in sorted(x.states):
                if f.state_map[alpha] != start:
                    continue
                top = HdtsMap(inc.src, x, {origin: alpha}, {})
                if exists_lift(LiftingSquare(inc, top, f, d)) is None:
                    return False
    return True


def _moves(x: Hdts) -> dict[str, set[tuple[str, str]]]:
    out: dict[str, set[tuple[str, str]]] = {s: set() for s in x.states}
    for t in x.edges:
        out[t.source].add((x.label_of[t.actions[0]], t.target))
    return out


def greatest_bisimulation(x: Hdts, y: Hdts) -> Relation:
    """Largest relation satisfying both transfer clauses for 1-cube paths,
    by deleting violating pairs from the full relation until stable."""
    mx, my = _moves(x), _moves(y)
    rel = {(a, b) for a in x.states for b in y.states}
    changed = True
    while changed:
        changed = False
        for a, b in sorted(rel):
            fwd = all(any(lb == la and (a2, b2) in rel for lb, b2 in my[b]) for la, a2 in mx[a])
            bwd = all(any(la == lb and (a2, b2) in rel for la, a2 in mx[a]) for lb, b2 in my[b])
            if not (fwd and bwd):
                rel.discard((a, b))
                changed = True
    return Relation(x, y, frozenset(rel))


def relation_span(rel: Relation) -> Span:
    """The span built from ``X x_R Y`` and the cubical coreflector."""
    x, y = rel.left, rel.right
    prod, p1, p2 = product(x, y)
    keep = {join_id(a, b) for a, b in rel.pairs}
    restricted = Hdts(
        frozenset(keep),
        prod.actions,
        frozenset(t for t in prod.transitions if t.source in keep and t.target in keep),
    )
    apex = cts_coreflector(restricted).object

    def leg(p: HdtsMap, dst: Hdts) -> HdtsMap:
        return HdtsMap(
            apex, dst, {s: p.state_map[s] for s in apex.states}, {a: p.action_map[a] for a in apex.action_ids}
        )

    return Span(apex, leg(p1, x), leg(p2, y))


def bisimilar(x: Hdts, y: Hdts, mode: str = TOTAL) -> tuple[bool, Span | None]:
    """Bisimilarity for the path set of all 1-cubes.

    ``literal`` accepts any relation, the empty one included, so it always
    holds.  ``total`` also asks the greatest bisimulation to cover every
    state on both sides.
    """
    if mode not in (TOTAL, LITERAL):
        raise ValueError(f"unknown mode {mode!r}")
    rel = greatest_bisimulation(x, y)
    if mode == TOTAL and not (rel.left_total() and rel.right_total()):
        return False, None
    return True, relation_span(rel)


def span_is_open(span: Span, labels: Iterable[str] | None = None) -> bool:
    if labels is None:
        labels = set(span.left.dst.label_of.values()) | set(span.right.dst.label_of.values())
    paths = PathSet.edges(labels)
    return is_open(span.left, paths) and is_open(span.right, paths)
