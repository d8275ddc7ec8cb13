"""Level-preserving finitary permutations and their action.

A :class:`Perm` permutes indices separately on each level and moves only
finitely many points.  It acts on coords, sequents, coord sets, towers and
conditions; on a condition the level-0 bitstrings are relocated with their
content unchanged.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, Mapping, Tuple

from .errors import DecodeError, Incompatible, PreconditionError, VerificationFailure
from .towers import (
    AnyCondition,
    Condition,
    Coord,
    CoordSet,
    Tower,
    as_coord,
    coord_set,
    is_complete,
    leq,
    target,
    target_of,
    tower_part,
    union,
)


def _normalize(levels) -> Dict[int, Dict[int, int]]:
    out = {}
    for level, mapping in levels.items():
        moved = {int(a): int(b) for a, b in mapping.items() if a != b}
        if not moved:
            continue
        if set(moved) != set(moved.values()):
            raise ValueError(f"level {level} map is not a bijection on its support")
        out[int(level)] = dict(sorted(moved.items()))
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class Perm:
    levels: Mapping[int, Mapping[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "levels", _normalize(self.levels))

    def __hash__(self):
        return hash(tuple((k, tuple(v.items())) for k, v in self.levels.items()))

    def __call__(self, c: Coord) -> Coord:
        m = self.levels.get(c.level)
        if m is None:
            return c
        return Coord(c.level, m.get(c.index, c.index))

    @property
    def support(self) -> CoordSet:
        return frozenset(Coord(lv, i) for lv, m in self.levels.items() for i in m)

    @classmethod
    def from_swaps(cls, swaps: Iterable[Tuple[Coord, Coord]]) -> "Perm":
        """Product of disjoint same-level transpositions."""
        levels: Dict[int, Dict[int, int]] = {}
        for a, b in swaps:
            a, b = as_coord(a), as_coord(b)
            if a.level != b.level:
                raise ValueError(f"swap {a!r}<->{b!r} changes level")
            m = levels.setdefault(a.level, {})
            if a.index in m or b.index in m:
                raise ValueError("swaps are not disjoint")
            m[a.index], m[b.index] = b.index, a.index
        return cls(levels)


IDENTITY = Perm()


def act(pi: Perm, x):
    if isinstance(x, Coord):
        return pi(x)
    if isinstance(x, Tower):
        return Tower({pi(k): tuple(pi(c) for c in seq) for k, seq in x.sequents.items()})
    if isinstance(x, Condition):
        cohen = {pi(Coord(0, i)).index: bits for i, bits in x.cohen.items()}
        return Condition(cohen, act(pi, x.tower))
    if isinstance(x, tuple):
        return tuple(pi(as_coord(c)) for c in x)
    if isinstance(x, AbstractSet):
        return frozenset(pi(as_coord(c)) for c in x)
    raise TypeError(f"cannot act on {type(x).__name__}")


def compose(pi: Perm, sigma: Perm) -> Perm:
    """``compose(pi, sigma)`` acts as ``pi`` after ``sigma``."""
    levels = {}
    for level in set(pi.levels) | set(sigma.levels):
        p, s = pi.levels.get(level, {}), sigma.levels.get(level, {})
        pts = set(p) | set(s)
        levels[level] = {i: p.get(s.get(i, i), s.get(i, i)) for i in pts}
    return Perm(levels)


def invert(pi: Perm) -> Perm:
    return Perm({lv: {b: a for a, b in m.items()} for lv, m in pi.levels.items()})


def in_fix(pi: Perm, e: Iterable) -> bool:
    return all(pi(c) == c for c in coord_set(e))


def fresh_swap(q: AnyCondition, s: Iterable) -> Perm:
    """Involution fixing ``s`` and swapping the rest of ``t(q)`` out.

    Each coord of ``t(q) - s`` (canonical order) is paired with the least
    index on its level not used by ``t(q)`` or an earlier allocation.
    """
    s = coord_set(s)
    t = target(q)
    if not s <= t:
        raise PreconditionError("the fixed set is not contained in the target")
    if target_of(q, s) != s:
        raise PreconditionError("the fixed set is not generation-closed")
    used: Dict[int, set] = {}
    for c in t:
        used.setdefault(c.level, set()).add(c.index)
    swaps = []
    for c in sorted(t - s):
        taken = used[c.level]
        j = 0
        while j in taken:
            j += 1
        taken.add(j)
        swaps.append((c, Coord(c.level, j)))
    return Perm.from_swaps(swaps)


def _raw_union_consistent(a: AnyCondition, b: AnyCondition) -> bool:
    sa, sb = tower_part(a).sequents, tower_part(b).sequents
    return all(sa[k] == sb[k] for k in sa.keys() & sb.keys())


def amalgamation_checks(q: AnyCondition, e: Iterable):
    """Run every amalgamation check without raising.

    Returns ``(pi, r, failures)``; ``r`` is None when ``q`` and ``pi(q)`` have
    no union.
    """
    if not is_complete(q):
        raise PreconditionError("tower is not complete")
    e = coord_set(e)
    t = target(q)
    if not e <= t:
        raise PreconditionError("generator set is not contained in the target")
    s = target_of(q, e)
    pi = fresh_swap(q, s)
    pq = act(pi, q)
    failures = []
    if not target(q) & act(pi, t) <= s:
        failures.append("overlap: t(q) and pi[t(q)] meet outside the fixed set")
    if not _raw_union_consistent(q, pq):
        failures.append("function: q and pi(q) disagree on a shared coord")
    r = None
    try:
        r = union(q, pq)
    except Incompatible as exc:
        failures.append(f"union is not a tower: {exc.reason} ({exc.detail})")
    if r is not None:
        if not is_complete(r):
            failures.append("union is not complete")
        if not leq(r, q):
            failures.append("r <= q fails")
        if not leq(r, pq):
            failures.append("r <= pi(q) fails")
    rest = sorted(t - s)
    closures = {g: target_of(q, {g}) for g in rest}
    for g0 in rest:
        for g1 in rest:
            lhs = closures[g0] & act(pi, closures[g1])
            rhs = closures[g0] & closures[g1] & s
            if lhs != rhs:
                failures.append(f"inner equation fails for {g0!r}, {g1!r}")
    return pi, r, failures


def amalgamate(q: AnyCondition, e: Iterable) -> Tuple[Perm, AnyCondition]:
    """Fresh-swap ``q`` away from the closure of ``e`` and take ``q u pi(q)``.

    Raises :class:`VerificationFailure` listing every failed check.
    """
    pi, r, failures = amalgamation_checks(q, e)
    if failures:
        raise VerificationFailure(failures)
    return pi, r


def random_perm(levels: int, width: int, seed: int, moves: int = None) -> Perm:
    """Seeded permutation moving indices below ``2 * width`` on levels below ``levels``."""
    rng = random.Random(seed)
    out = {}
    for level in range(max(levels, 0)):
        if rng.random() < 0.3:
            continue
        k = rng.randint(0, 2 * width) if moves is None else moves
        pts = rng.sample(range(2 * width), min(k, 2 * width))
        img = pts[:]
        rng.shuffle(img)
        out[level] = dict(zip(pts, img))
    return Perm(out)


def perm_to_json(pi: Perm) -> dict:
    return {"levels": [{"level": lv, "map": [[a, b] for a, b in m.items()]} for lv, m in pi.levels.items()]}


def perm_from_json(obj) -> Perm:
    try:
        levels = {}
        for item in obj["levels"]:
            level = item["level"]
            if level in levels:
                raise DecodeError(f"duplicate level {level}")
            m = {}
            for a, b in item["map"]:
                if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in (a, b)):
                    raise DecodeError("map entries must be natural numbers")
                if a in m:
                    raise DecodeError(f"bijectivity: level {level} maps {a} twice")
                m[a] = b
            if len(set(m.values())) != len(m) or set(m) != set(m.values()):
                raise DecodeError(f"bijectivity: level {level} map is not a permutation of its points")
            levels[level] = m
        return Perm(levels)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DecodeError):
            raise
        raise DecodeError(f"malformed permutation: {exc}") from None
