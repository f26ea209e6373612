"""Brute-force reference implementations.

Everything here works on ordered tuples or plain assignments and avoids the
library's closure, search and union-find code, so agreement with the library
is meaningful. Library objects are used only as plain containers.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

from hdts.builders import cube, double_transition
from hdts.model import Action, Hdts, HdtsMap


# ---------------------------------------------------------------- closure


def _perms(t):
    a, us, b = t
    return {(a, p, b) for p in itertools.permutations(us)}


def ordered_closure(seed):
    """Close a set of multiset keys under the ordered Coherence axiom.

    Every key is expanded to all orderings of its actions; the axiom is then
    applied to tuples exactly as written, with the Multiset axiom re-applied
    to every new tuple, until nothing changes.
    """
    tuples = set()
    for t in seed:
        tuples |= _perms((t[0], tuple(t[1]), t[2]))
    while True:
        index = defaultdict(set)
        for a, us, b in tuples:
            index[(a, us)].add(b)
        new = set()
        for a, us, b in tuples:
            n = len(us)
            if n < 3:
                continue
            for p in range(1, n):
                for q in range(1, n - p):
                    for v1 in index.get((a, us[:p]), ()):
                        if b not in index.get((v1, us[p:]), ()):
                            continue
                        for v2 in index.get((a, us[: p + q]), ()):
                            if b not in index.get((v2, us[p + q :]), ()):
                                continue
                            cand = (v1, us[p : p + q], v2)
                            if cand not in tuples:
                                new |= _perms(cand)
        if not new:
            return {(a, tuple(sorted(us)), b) for a, us, b in tuples}
        tuples |= new


# ------------------------------------------------------------------- homs


def homs(x: Hdts, y: Hdts, fixed_states=None, fixed_actions=None):
    """All maps ``x -> y``: every label-respecting action assignment, then a
    depth-first scan of state assignments checked transition by transition."""
    fixed_states = fixed_states or {}
    fixed_actions = fixed_actions or {}
    xa = sorted(x.action_ids)
    choices = []
    for a in xa:
        if a in fixed_actions:
            choices.append([fixed_actions[a]])
        else:
            choices.append([b for b in sorted(y.action_ids) if y.label_of[b] == x.label_of[a]])
    xs = sorted(x.states)
    ys = sorted(y.states)
    yt = {(t.source, t.actions, t.target) for t in y.transitions}
    out = []
    for combo in itertools.product(*choices):
        am = dict(zip(xa, combo))
        acts_img = {t: tuple(sorted(am[u] for u in t.actions)) for t in x.transitions}
        # drop transitions whose action image never occurs in y
        present = {t.actions for t in y.transitions}
        if any(img not in present for img in acts_img.values()):
            continue
        sm = {}

        def ok(s):
            for t in x.transitions:
                if s in (t.source, t.target) and t.source in sm and t.target in sm:
                    if (sm[t.source], acts_img[t], sm[t.target]) not in yt:
                        return False
            return True

        def rec(k):
            if k == len(xs):
                out.append(HdtsMap(x, y, dict(sm), dict(am)))
                return
            s = xs[k]
            for c in [fixed_states[s]] if s in fixed_states else ys:
                sm[s] = c
                if ok(s):
                    rec(k + 1)
                del sm[s]

        rec(0)
    return out


def maps_equal(f: HdtsMap, g: HdtsMap) -> bool:
    return dict(f.state_map) == dict(g.state_map) and dict(f.action_map) == dict(g.action_map)


def compose(f: HdtsMap, g: HdtsMap) -> HdtsMap:
    """``g . f``"""
    return HdtsMap(
        f.src,
        g.dst,
        {s: g.state_map[v] for s, v in f.state_map.items()},
        {a: g.action_map[v] for a, v in f.action_map.items()},
    )


# ------------------------------------------------------------- colimits


class _UF:
    def __init__(self):
        self.parent = {}

    def add(self, k):
        self.parent.setdefault(k, k)

    def find(self, k):
        while self.parent[k] != k:
            k = self.parent[k]
        return k

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def colimit_over(x: Hdts, legs, morphisms):
    """Colimit of a diagram of systems ``legs[i].src`` sitting over ``x``.

    ``morphisms`` holds ``(i, j, h)`` with ``h: legs[i].src -> legs[j].src``.
    Returns the colimit as an Hdts with string ids and the induced map to ``x``.
    """
    uf_s, uf_a = _UF(), _UF()
    for i, f in enumerate(legs):
        for s in f.src.states:
            uf_s.add((i, s))
        for a in f.src.action_ids:
            uf_a.add((i, a))
    for i, j, h in morphisms:
        for s, v in h.state_map.items():
            uf_s.union((i, s), (j, v))
        for a, v in h.action_map.items():
            uf_a.union((i, a), (j, v))

    def sname(k):
        r = uf_s.find(k)
        return f"s{r[0]}:{r[1]}"

    def aname(k):
        r = uf_a.find(k)
        return f"a{r[0]}:{r[1]}"

    states = {sname(k) for k in uf_s.parent}
    actions = {}
    q_s, q_a = {}, {}
    for k in uf_s.parent:
        q_s[sname(k)] = legs[k[0]].state_map[k[1]]
    for k in uf_a.parent:
        i, a = k
        actions[aname(k)] = legs[i].src.label_of[a]
        q_a[aname(k)] = legs[i].action_map[a]
    seed = set()
    for i, f in enumerate(legs):
        for t in f.src.transitions:
            seed.add((sname((i, t.source)), tuple(sorted(aname((i, u)) for u in t.actions)), sname((i, t.target))))
    trans = ordered_closure(seed)
    obj = Hdts.create(states, {a: lab for a, lab in actions.items()}, trans)
    return obj, HdtsMap(obj, x, q_s, q_a)


def _labels(x: Hdts):
    return sorted(set(x.label_of.values()))


def cube_legs(x: Hdts, max_dim: int):
    legs = []
    for n in range(max_dim + 1):
        for labels in itertools.product(_labels(x), repeat=n):
            legs.extend(homs(cube(n, list(labels)), x))
    return legs


def comma_morphisms(legs):
    """Every ``h`` between leg domains with ``legs[j] . h == legs[i]``."""
    cache = {}
    out = []
    for i, f in enumerate(legs):
        for j, g in enumerate(legs):
            key = (f.src, g.src)
            if key not in cache:
                cache[key] = homs(f.src, g.src)
            for h in cache[key]:
                if maps_equal(compose(h, g), f):
                    out.append((i, j, h))
    return out


def right_adjoint_colimit(x: Hdts):
    """The colimit of all cubes and double transitions over ``x`` with every
    morphism between them over ``x``. Returns ``(object, q)``."""
    legs = cube_legs(x, x.max_dim)
    for lab in _labels(x):
        legs.extend(homs(double_transition(lab), x))
    return colimit_over(x, legs, comma_morphisms(legs))


def comma_cubification(x: Hdts, max_dim: int = 2):
    legs = cube_legs(x, max_dim)
    return colimit_over(x, legs, comma_morphisms(legs))


def image_of(q: HdtsMap) -> Hdts:
    return Hdts.create(
        set(q.state_map.values()),
        {Action(q.action_map[a], q.src.label_of[a]) for a in q.src.action_ids},
        {(q.state_map[t.source], tuple(q.action_map[u] for u in t.actions), q.state_map[t.target]) for t in q.src.transitions},
    )


def injective(m) -> bool:
    return len(set(m.values())) == len(m)


# --------------------------------------------------------- bisimulation


def max_bisimulation(x: Hdts, y: Hdts):
    """Union of all relations satisfying both 1-step transfer clauses."""
    moves_x = {s: {(x.label_of[t.actions[0]], t.target) for t in x.edges if t.source == s} for s in x.states}
    moves_y = {s: {(y.label_of[t.actions[0]], t.target) for t in y.edges if t.source == s} for s in y.states}
    universe = sorted(itertools.product(sorted(x.states), sorted(y.states)))
    best = set()
    for mask in range(1 << len(universe)):
        rel = {p for k, p in enumerate(universe) if mask >> k & 1}
        if all(
            all(any(l2 == l1 and (a2, b2) in rel for l2, b2 in moves_y[b]) for l1, a2 in moves_x[a])
            and all(any(l1 == l2 and (a2, b2) in rel for l1, a2 in moves_x[a]) for l2, b2 in moves_y[b])
            for a, b in rel
        ):
            best |= rel
    return best


# --------------------------------------------------------- label level


def label_level(x: Hdts):
    """Transitions of ``x`` with every action replaced by its label, closed."""
    seed = {(t.source, tuple(sorted(x.label_of[u] for u in t.actions)), t.target) for t in x.transitions}
    return ordered_closure(seed)


def collapse_is_iso(f: HdtsMap) -> bool:
    """Whether ``f`` becomes invertible once every label has one action."""
    if not injective(f.state_map) or set(f.state_map.values()) != set(f.dst.states):
        return False
    if set(f.src.label_of.values()) != set(f.dst.label_of.values()):
        return False
    img = {(f.state_map[a], us, f.state_map[b]) for a, us, b in label_level(f.src)}
    return img == label_level(f.dst)


# ------------------------------------------------------------ cubicality


def cubical_by_injectivity(x: Hdts) -> bool:
    """Injectivity against every bare action into its 1-cube and every pure
    n-transition into its n-cube, checked by extending each map directly."""
    used = {t.actions[0] for t in x.transitions if t.dim == 1}
    if set(x.action_ids) - used:
        return False
    for t in x.transitions:
        if t.dim < 2:
            continue
        for order in set(itertools.permutations(t.actions)):
            n = len(order)
            c = cube(n, [x.label_of[u] for u in order])
            top = max(c.transitions, key=lambda s: s.dim)
            fixed_a = {}
            for u in top.actions:
                axis = int(u.rsplit("#", 1)[1]) - 1
                fixed_a[u] = order[axis]
            fixed_s = {top.source: t.source, top.target: t.target}
            if not homs(c, x, fixed_states=fixed_s, fixed_actions=fixed_a):
                return False
    return True


# --------------------------------------------------------------- product


def ordered_product(x: Hdts, y: Hdts):
    """Product transitions by pairing every ordering of a transition of ``x``
    with every ordering of one of ``y`` whose labels agree position by position."""
    out = set()
    for s in x.transitions:
        for t in y.transitions:
            if s.dim != t.dim:
                continue
            for ps in set(itertools.permutations(s.actions)):
                for pt in set(itertools.permutations(t.actions)):
                    if all(x.label_of[u] == y.label_of[v] for u, v in zip(ps, pt)):
                        out.add(((s.source, t.source), tuple(sorted(zip(ps, pt))), (s.target, t.target)))
    return out


def cocones(objects, arrows, target):
    """Number of compatible families of maps from the diagram into ``target``."""
    per = [homs(o, target) for o in objects]
    count = 0
    for fam in itertools.product(*per):
        if all(maps_equal(compose(f, fam[j]), fam[i]) for i, j, f in arrows):
            count += 1
    return count
