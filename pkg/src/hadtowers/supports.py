"""Generator sets: irreducibility, the closure-inclusion order and its rank.

Single queries work on coord sets directly.  The exhaustive scans index the
target (at most 64 coords) and hand bitmasks to :mod:`hadtowers._kernels`.
"""
from __future__ import annotations

import random
from functools import cmp_to_key
from itertools import groupby
from typing import Iterable, List, Sequence

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .ordinals import Ordinal, ord_cmp, ord_of, ord_sum
from .towers import AnyCondition, Coord, CoordSet, coord_set, is_complete, target, target_of, tower_part

DEFAULT_CAP = 12


def _check(p: AnyCondition, *sets: CoordSet) -> CoordSet:
    if not is_complete(p):
        raise PreconditionError("tower is not complete")
    t = target(p)
    for s in sets:
        outside = s - t
        if outside:
            raise PreconditionError(f"coords outside the target: {sorted(outside)}")
    return t


def is_generated_by(p: AnyCondition, d: Iterable, e: Iterable) -> bool:
    d, e = coord_set(d), coord_set(e)
    _check(p, d, e)
    return e <= d and target_of(p, e) == d


def _irreducible(p, a: CoordSet) -> bool:
    full = target_of(p, a)
    return all(target_of(p, a - {c}) != full for c in a)


def is_irreducible(p: AnyCondition, a: Iterable) -> bool:
    a = coord_set(a)
    _check(p, a)
    return _irreducible(p, a)


def reduce_to_irreducible(p: AnyCondition, a: Iterable, order: Sequence[Coord] = None) -> CoordSet:
    """Drop redundant generators until none is redundant.

    Candidates are tried in ``order`` (canonical coord order by default),
    restarting after each removal.
    """
    a = coord_set(a)
    _check(p, a)
    full = target_of(p, a)
    rank_of = {c: i for i, c in enumerate(order)} if order is not None else None
    removed = True
    while removed:
        removed = False
        cands = sorted(a, key=rank_of.__getitem__) if rank_of else sorted(a)
        for c in cands:
            if target_of(p, a - {c}) == full:
                a = a - {c}
                removed = True
                break
    return a


def gen_leq(p: AnyCondition, a: Iterable, b: Iterable) -> bool:
    a, b = coord_set(a), coord_set(b)
    _check(p, a, b)
    for x in (a, b):
        if not _irreducible(p, x):
            raise PreconditionError(f"{sorted(x)} is not irreducible")
    return target_of(p, a) <= target_of(p, b)


def rank(a: Iterable) -> Ordinal:
    """Sum of ``w^level * count`` over levels, largest level first."""
    a = sorted(coord_set(a), key=lambda c: -c.level)
    return ord_sum(ord_of(level, len(list(grp))) for level, grp in groupby(a, key=lambda c: c.level))


def intersection_generator(p: AnyCondition, gs: Sequence[Iterable]) -> CoordSet:
    """Irreducible generator of the intersection of the closures of ``gs``."""
    gs = [coord_set(g) for g in gs]
    if not gs:
        raise PreconditionError("need at least one generator set")
    _check(p, *gs)
    d = target_of(p, gs[0])
    for g in gs[1:]:
        d &= target_of(p, g)
    return reduce_to_irreducible(p, d)


# -- indexed scans ---------------------------------------------------------

class IndexedTarget:
    """The target of a complete tower numbered in canonical order."""

    def __init__(self, p: AnyCondition):
        if not is_complete(p):
            raise PreconditionError("tower is not complete")
        self.coords: List[Coord] = sorted(target(p))
        self.n = len(self.coords)
        if self.n > _kernels.MAX_BITS:
            raise PreconditionError(f"target has {self.n} coords; bitmask scans allow {_kernels.MAX_BITS}")
        self.pos = {c: i for i, c in enumerate(self.coords)}
        seqs = tower_part(p).sequents
        children = np.zeros(self.n, dtype=np.uint64)
        for i, c in enumerate(self.coords):
            m = 0
            for child in seqs.get(c, ()):
                m |= 1 << self.pos[child]
            children[i] = m
        self.single = _kernels.singleton_closures(children)

    def mask(self, s: Iterable[Coord]) -> int:
        m = 0
        for c in s:
            m |= 1 << self.pos[c]
        return m

    def coords_of(self, mask: int) -> CoordSet:
        mask = int(mask)
        return frozenset(c for i, c in enumerate(self.coords) if mask >> i & 1)

    def subset_closures(self) -> np.ndarray:
        return _kernels.subset_closures(self.single)


def enumerate_irreducibles(p: AnyCondition, cap: int = DEFAULT_CAP) -> List[CoordSet]:
    """All irreducible subsets of ``t(p)``, sorted by size then coords."""
    idx = IndexedTarget(p)
    if idx.n > cap:
        raise PreconditionError(f"target has {idx.n} coords, above the cap of {cap}")
    closures = idx.subset_closures()
    flags = _kernels.irreducible_flags(closures, idx.n)
    found = [idx.coords_of(m) for m in np.nonzero(flags)[0]]
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def order_report(p: AnyCondition, cap: int = DEFAULT_CAP) -> dict:
    """Exhaustive check of the closure-inclusion order on irreducibles.

    Counts antisymmetry violations (distinct irreducibles with one closure),
    rank violations (strictly smaller closure without strictly smaller
    rank), closed sets with no or several irreducible generators.
    """
    idx = IndexedTarget(p)
    if idx.n > cap:
        raise PreconditionError(f"target has {idx.n} coords, above the cap of {cap}")
    closures = idx.subset_closures()
    flags = _kernels.irreducible_flags(closures, idx.n)
    irr = np.nonzero(flags)[0].astype(np.uint64)
    irr_closures = closures[irr.astype(np.int64)]

    ranks = [rank(idx.coords_of(m)) for m in irr]
    order = sorted(range(len(ranks)), key=cmp_to_key(lambda i, j: {"lt": -1, "eq": 0, "gt": 1}[ord_cmp(ranks[i], ranks[j])]))
    positions = np.zeros(len(ranks), dtype=np.int64)
    level = 0
    for k, i in enumerate(order):
        if k and ord_cmp(ranks[order[k - 1]], ranks[i]) != "eq":
            level += 1
        positions[i] = level
    same, bad_rank = _kernels.order_violations(irr, irr_closures, positions)

    closed = np.unique(closures)
    gens_per_closed = dict(zip(*np.unique(irr_closures, return_counts=True)))
    missing = sum(1 for c in closed if c not in gens_per_closed)
    multiple = sum(1 for v in gens_per_closed.values() if v > 1)
    return {
        "coords": idx.n,
        "irreducibles": int(irr.shape[0]),
        "closed_sets": int(closed.shape[0]),
        "antisymmetry_violations": same,
        "rank_violations": bad_rank,
        "closed_without_generator": missing,
        "closed_with_several_generators": multiple,
    }


def random_removal_orders(a: Iterable[Coord], count: int, seed: int) -> List[List[Coord]]:
    rng = random.Random(seed)
    base = sorted(coord_set(a))
    out = []
    for _ in range(count):
        order = base[:]
        rng.shuffle(order)
        out.append(order)
    return out
