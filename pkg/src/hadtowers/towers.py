"""Finite towers, conditions and their target closures.

A tower maps coords ``(level, index)`` with ``level >= 1`` to nonempty
injective sequences of coords on strictly lower levels; two coords on the
same level never carry the same sequence.  A condition pairs a tower with
a Cohen part: finitely many level-0 bitstrings.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, NamedTuple, Tuple, Union

from .errors import Incompatible, InvalidTower, PreconditionError


class Coord(NamedTuple):
    level: int
    index: int

    def __repr__(self):
        return f"({self.level},{self.index})"


Sequent = Tuple[Coord, ...]
CoordSet = FrozenSet[Coord]


def as_coord(c) -> Coord:
    if isinstance(c, Coord):
        return c
    level, index = c
    if level < 0 or index < 0:
        raise ValueError(f"coord {c!r} has a negative component")
    return Coord(int(level), int(index))


def coord_set(coords: Iterable) -> CoordSet:
    return frozenset(as_coord(c) for c in coords)


def _check_sequent(key: Coord, seq: Sequent) -> None:
    if not seq:
        raise InvalidTower("nonempty sequent", f"sequent at {key!r} is empty")
    if len(set(seq)) != len(seq):
        raise InvalidTower("injectivity", f"sequent at {key!r} repeats a coord")
    for c in seq:
        if c.level >= key.level:
            raise InvalidTower(
                "owner-level bound", f"{c!r} in sequent at {key!r} is not on a lower level"
            )


@dataclass(frozen=True)
class Tower:
    sequents: Mapping[Coord, Sequent] = field(default_factory=dict)

    def __post_init__(self):
        seqs: Dict[Coord, Sequent] = {}
        for key, seq in self.sequents.items():
            key = as_coord(key)
            if key.level < 1:
                raise InvalidTower("key level", f"key {key!r} is on level 0")
            seq = tuple(as_coord(c) for c in seq)
            _check_sequent(key, seq)
            seqs[key] = seq
        seen: Dict[Tuple[int, Sequent], Coord] = {}
        for key in sorted(seqs):
            other = seen.setdefault((key.level, seqs[key]), key)
            if other != key:
                raise InvalidTower(
                    "same-level distinctness", f"{other!r} and {key!r} carry the same sequent"
                )
        object.__setattr__(self, "sequents", {k: seqs[k] for k in sorted(seqs)})

    def __hash__(self):
        return hash(tuple(self.sequents.items()))

    def __len__(self):
        return len(self.sequents)

    @property
    def domain(self) -> CoordSet:
        return frozenset(self.sequents)


def _check_bits(index: int, bits: str) -> None:
    if index < 0:
        raise InvalidTower("cohen index", f"negative index {index}")
    if any(b not in "01" for b in bits):
        raise InvalidTower("bitstring", f"string at index {index} is not over {{0,1}}")


@dataclass(frozen=True)
class Condition:
    cohen: Mapping[int, str] = field(default_factory=dict)
    tower: Tower = field(default_factory=Tower)

    def __post_init__(self):
        cohen = {}
        for index, bits in self.cohen.items():
            _check_bits(int(index), bits)
            cohen[int(index)] = bits
        object.__setattr__(self, "cohen", dict(sorted(cohen.items())))
        if not isinstance(self.tower, Tower):
            object.__setattr__(self, "tower", Tower(self.tower))

    def __hash__(self):
        return hash((tuple(self.cohen.items()), self.tower))


AnyCondition = Union[Tower, Condition]


def tower_part(p: AnyCondition) -> Tower:
    return p.tower if isinstance(p, Condition) else p


def target(p: AnyCondition) -> CoordSet:
    """Domain plus every coord any sequent reaches."""
    tw = tower_part(p)
    out = set(tw.sequents)
    for seq in tw.sequents.values():
        out.update(seq)
    if isinstance(p, Condition):
        out.update(Coord(0, i) for i in p.cohen)
    return frozenset(out)


def target_of(p: AnyCondition, e: Iterable) -> CoordSet:
    """Least set containing ``e`` restricted to the target and closed under
    taking sequent ranges of non-level-0 members."""
    seqs = tower_part(p).sequents
    full = target(p)
    todo = [c for c in coord_set(e) if c in full]
    out = set(todo)
    while todo:
        c = todo.pop()
        if c.level == 0:
            continue
        for child in seqs.get(c, ()):
            if child not in out:
                out.add(child)
                todo.append(child)
    return frozenset(out)


def is_complete(p: AnyCondition) -> bool:
    seqs = tower_part(p).sequents
    return all(c.level == 0 or c in seqs for seq in seqs.values() for c in seq)


def _as_condition(p: AnyCondition) -> Condition:
    return p if isinstance(p, Condition) else Condition({}, p)


def leq(q: AnyCondition, p: AnyCondition) -> bool:
    """``q <= p``: q carries every sequent of p and extends its bitstrings."""
    qs, ps = tower_part(q).sequents, tower_part(p).sequents
    if any(qs.get(k) != v for k, v in ps.items()):
        return False
    if isinstance(p, Condition):
        qc = q.cohen if isinstance(q, Condition) else {}
        for i, bits in p.cohen.items():
            if i not in qc or not qc[i].startswith(bits):
                return False
    return True


def union(p: AnyCondition, q: AnyCondition) -> AnyCondition:
    """Greatest lower bound; raises :class:`Incompatible` if none exists."""
    merged = dict(tower_part(p).sequents)
    for k, v in tower_part(q).sequents.items():
        if merged.setdefault(k, v) != v:
            raise Incompatible("function", f"different sequents at {k!r}")
    try:
        tw = Tower(merged)
    except InvalidTower as exc:
        raise Incompatible(exc.invariant, exc.detail) from None
    if not isinstance(p, Condition) and not isinstance(q, Condition):
        return tw
    cohen = dict(_as_condition(p).cohen)
    for i, bits in _as_condition(q).cohen.items():
        old = cohen.get(i, "")
        if old.startswith(bits):
            continue
        if not bits.startswith(old):
            raise Incompatible("bitstring comparability", f"index {i}")
        cohen[i] = bits
    return Condition(cohen, tw)


def restrict(p: AnyCondition, s: Iterable) -> AnyCondition:
    """Keep only the sequents (and bitstrings) at coords in ``s``."""
    s = coord_set(s)
    tw = Tower({k: v for k, v in tower_part(p).sequents.items() if k in s})
    if isinstance(p, Condition):
        return Condition({i: b for i, b in p.cohen.items() if Coord(0, i) in s}, tw)
    return tw


def _least_free(used: Iterable[int]) -> int:
    used = set(used)
    i = 0
    while i in used:
        i += 1
    return i


def _require_complete(p: AnyCondition) -> None:
    if not is_complete(p):
        raise PreconditionError("tower is not complete")


def add_to_target(p: AnyCondition, c) -> AnyCondition:
    """Extend ``p`` so that ``c`` enters the target, using least fresh indices.

    A level-0 coord is hung below a fresh level-1 key on a tower; on a
    condition it becomes a new empty Cohen string instead.  A higher coord
    gets a one-entry sequent pointing at a fresh level-0 coord.
    """
    c = as_coord(c)
    _require_complete(p)
    t = target(p)
    if c in t:
        raise PreconditionError(f"{c!r} is already in the target")
    seqs = dict(tower_part(p).sequents)
    if c.level == 0 and isinstance(p, Condition):
        return Condition({**p.cohen, c.index: ""}, p.tower)
    if c.level == 0:
        fresh = _least_free(k.index for k in seqs if k.level == 1)
        seqs[Coord(1, fresh)] = (c,)
    else:
        fresh = _least_free(x.index for x in t if x.level == 0)
        seqs[c] = (Coord(0, fresh),)
    if isinstance(p, Condition):
        return Condition(p.cohen, Tower(seqs))
    return Tower(seqs)


def singleton_cover(p: Tower) -> Tuple[Tower, Coord]:
    """Extend ``p`` by one sequent whose range enumerates all of ``t(p)``."""
    _require_complete(p)
    t = target(p)
    if not t:
        raise PreconditionError("cannot cover an empty target with a nonempty sequent")
    top = Coord(1 + max(k.level for k in p.sequents), 0)
    seqs = dict(p.sequents)
    seqs[top] = tuple(sorted(t))
    return Tower(seqs), top


def random_tower(levels: int, width: int, max_seq: int, seed: int, density: float = None) -> Tower:
    """Seeded complete tower with keys on levels ``1..levels-1`` and indices
    below ``width``.

    Built bottom-up so that every non-level-0 range entry is an existing key.
    ``density`` is the chance each candidate key is used; drawn per tower
    when omitted so that sizes vary across seeds.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if width < 0 or max_seq < 0:
        raise ValueError("width and max_seq must be non-negative")
    rng = random.Random(seed)
    if density is None:
        density = rng.uniform(0.15, 0.9)
    seqs: Dict[Coord, Sequent] = {}
    pool = [Coord(0, i) for i in range(width)]
    for level in range(1, levels):
        used = set()
        new_keys = []
        for index in range(width):
            if not pool or max_seq < 1 or rng.random() >= density:
                continue
            for _ in range(8):
                length = rng.randint(1, min(max_seq, len(pool)))
                seq = tuple(rng.sample(pool, length))
                if seq not in used:
                    used.add(seq)
                    key = Coord(level, index)
                    seqs[key] = seq
                    new_keys.append(key)
                    break
        pool.extend(new_keys)
    return Tower(seqs)


def random_condition(levels: int, width: int, max_seq: int, seed: int, max_bits: int = 8) -> Condition:
    tw = random_tower(levels, width, max_seq, seed)
    rng = random.Random(f"cohen:{seed}")
    cohen = {}
    for i in range(width):
        if rng.random() < 0.5:
            cohen[i] = "".join(rng.choice("01") for _ in range(rng.randint(0, max_bits)))
    return Condition(cohen, tw)


# -- JSON ------------------------------------------------------------------

def tower_to_json(p: AnyCondition) -> dict:
    tw = tower_part(p)
    out = {
        "sequents": [
            {"level": k.level, "index": k.index, "range": [[c.level, c.index] for c in seq]}
            for k, seq in tw.sequents.items()
        ]
    }
    if isinstance(p, Condition):
        out["cohen"] = [{"index": i, "bits": b} for i, b in p.cohen.items()]
    return out


def _nat(x, what):
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise InvalidTower("natural number", f"{what} must be a natural, got {x!r}")
    return x


def tower_from_json(obj) -> AnyCondition:
    """Decode a tower, or a condition when a ``cohen`` field is present.

    Raises :class:`InvalidTower` naming the violated invariant.
    """
    if not isinstance(obj, dict) or not isinstance(obj.get("sequents"), list):
        raise InvalidTower("format", "expected an object with a 'sequents' list")
    seqs = {}
    for item in obj["sequents"]:
        try:
            key = Coord(_nat(item["level"], "level"), _nat(item["index"], "index"))
            rng = tuple(Coord(_nat(a, "level"), _nat(b, "index")) for a, b in item["range"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidTower):
                raise
            raise InvalidTower("format", f"malformed sequent entry {item!r}") from None
        if key in seqs:
            raise InvalidTower("function", f"duplicate key {key!r}")
        seqs[key] = rng
    tw = Tower(seqs)
    if "cohen" not in obj:
        return tw
    cohen = {}
    for item in obj["cohen"]:
        try:
            i, bits = _nat(item["index"], "index"), item["bits"]
        except (KeyError, TypeError):
            raise InvalidTower("format", f"malformed cohen entry {item!r}") from None
        if not isinstance(bits, str):
            raise InvalidTower("bitstring", f"bits at index {i} must be a string")
        if i in cohen:
            raise InvalidTower("function", f"duplicate cohen index {i}")
        cohen[i] = bits
    return Condition(cohen, tw)


def coords_to_json(s: Iterable[Coord]) -> list:
    return [[c.level, c.index] for c in sorted(s)]


def coords_from_json(obj) -> CoordSet:
    if not isinstance(obj, list):
        raise InvalidTower("format", "expected a list of [level, index] pairs")
    try:
        return frozenset(Coord(_nat(a, "level"), _nat(b, "index")) for a, b in obj)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidTower):
            raise
        raise InvalidTower("format", "expected a list of [level, index] pairs") from None
