"""Evaluating coords to nested values and walking their dependency DAG.

A level-0 coord evaluates to its assigned bitstring; a higher coord
evaluates to the tuple of evaluations of its sequent entries.  Leaves are
``str`` and nodes are ``tuple``.
"""
from __future__ import annotations

import random
from collections import deque
from typing import Dict, List, Literal, Mapping, Tuple, Union

from .errors import DecodeError, MissingAssignment, NoPath, PreconditionError
from .towers import AnyCondition, Condition, Coord, as_coord, is_complete, target, target_of, tower_part

NestedValue = Union[str, Tuple["NestedValue", ...]]
Assignment = Mapping[Coord, str]
Cmp = Literal["lt", "eq", "gt"]


def evaluate(p: AnyCondition, a: Assignment, gamma) -> NestedValue:
    gamma = as_coord(gamma)
    if not is_complete(p):
        raise PreconditionError("tower is not complete")
    if gamma not in target(p):
        raise PreconditionError(f"{gamma!r} is not in the target")
    leaves: Dict[Coord, str] = {}
    if isinstance(p, Condition):
        leaves.update((Coord(0, i), bits) for i, bits in p.cohen.items())
    leaves.update((as_coord(c), bits) for c, bits in a.items())
    for c in sorted(target_of(p, {gamma})):
        if c.level == 0 and c not in leaves:
            raise MissingAssignment(c)
    seqs = tower_part(p).sequents
    memo: Dict[Coord, NestedValue] = {}

    def go(c: Coord) -> NestedValue:
        if c.level == 0:
            return leaves[c]
        if c not in memo:
            memo[c] = tuple(go(child) for child in seqs[c])
        return memo[c]

    return go(gamma)


def index_path(value: NestedValue, path) -> NestedValue:
    for n in path:
        value = value[n]
    return value


def access_path(p: AnyCondition, src, dst) -> List[int]:
    """Shortest sequent-position path from ``src`` to ``dst``.

    Among shortest paths the lexicographically least is returned; breadth
    first search with children queued in position order finds it first.
    """
    src, dst = as_coord(src), as_coord(dst)
    if not is_complete(p):
        raise PreconditionError("tower is not complete")
    t = target(p)
    for c in (src, dst):
        if c not in t:
            raise PreconditionError(f"{c!r} is not in the target")
    seqs = tower_part(p).sequents
    paths = {src: []}
    queue = deque([src])
    while queue:
        c = queue.popleft()
        if c == dst:
            return paths[c]
        if c.level == 0:
            continue
        for n, child in enumerate(seqs[c]):
            if child not in paths:
                paths[child] = paths[c] + [n]
                queue.append(child)
    raise NoPath(f"{dst!r} is not reachable from {src!r}")


def depth(v: NestedValue) -> int:
    if isinstance(v, str):
        return 0
    return 1 + max((depth(x) for x in v), default=0)


def _cmp(x, y) -> int:
    return (x > y) - (x < y)


def _lex(v: NestedValue, w: NestedValue) -> int:
    dv, dw = depth(v), depth(w)
    if dv != dw:
        return _cmp(dv, dw)
    if dv == 0:
        # '0' < '1' and a proper prefix sorts first: plain string order.
        return _cmp(v, w)
    for x, y in zip(v, w):
        c = _lex(x, y)
        if c:
            return c
    return _cmp(len(v), len(w))


def lex_compare(v: NestedValue, w: NestedValue) -> Cmp:
    """Total order: shallower values first, then lexicographic."""
    return ("lt", "eq", "gt")[_lex(v, w) + 1]


def relocate(pi, a: Assignment) -> Dict[Coord, str]:
    """Move assignments along ``pi`` so values follow their names."""
    return {pi(as_coord(c)): bits for c, bits in a.items()}


def random_assignment(p: AnyCondition, seed: int, max_bits: int = 8) -> Dict[Coord, str]:
    rng = random.Random(seed)
    return {
        c: "".join(rng.choice("01") for _ in range(rng.randint(0, max_bits)))
        for c in sorted(target(p))
        if c.level == 0
    }


def random_value(rng: random.Random, max_depth: int = 4, width: int = 4, max_bits: int = 6) -> NestedValue:
    d = rng.randint(0, max_depth)
    if d == 0:
        return "".join(rng.choice("01") for _ in range(rng.randint(0, max_bits)))
    return tuple(random_value(rng, d - 1, width, max_bits) for _ in range(rng.randint(0, width)))


# -- JSON ------------------------------------------------------------------

def value_to_json(v: NestedValue):
    if isinstance(v, str):
        return v
    return [value_to_json(x) for x in v]


def value_from_json(obj) -> NestedValue:
    if isinstance(obj, str):
        if any(b not in "01" for b in obj):
            raise DecodeError(f"leaf {obj!r} is not a bitstring")
        return obj
    if isinstance(obj, list):
        return tuple(value_from_json(x) for x in obj)
    raise DecodeError(f"nested value must be a bitstring or list, got {type(obj).__name__}")


def assignment_to_json(a: Assignment) -> list:
    return [{"index": c.index, "bits": bits} for c, bits in sorted(a.items())]


def assignment_from_json(obj) -> Dict[Coord, str]:
    if not isinstance(obj, list):
        raise DecodeError("assignment must be a list of {index, bits} objects")
    out = {}
    for item in obj:
        try:
            i, bits = item["index"], item["bits"]
        except (KeyError, TypeError):
            raise DecodeError(f"malformed assignment entry {item!r}") from None
        if not isinstance(i, int) or i < 0 or not isinstance(bits, str) or any(b not in "01" for b in bits):
            raise DecodeError(f"malformed assignment entry {item!r}")
        out[Coord(0, i)] = bits
    return out
