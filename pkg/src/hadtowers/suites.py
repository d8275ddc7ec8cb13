"""Seeded property suites behind ``hadtowers suite``.

Each suite runs ``cases`` randomized cases, case ``i`` seeded from
``(seed, i)``, followed by a fixed exhaustive portion over small instances.
Failures are collected, never raised.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Tuple

from . import ordinals as od
from . import towers as tw
from .errors import Incompatible, MissingAssignment, NoPath
from .evaluation import access_path, evaluate, index_path, lex_compare, random_assignment, random_value, relocate
from .supports import (
    enumerate_irreducibles,
    gen_leq,
    intersection_generator,
    is_irreducible,
    order_report,
    random_removal_orders,
    reduce_to_irreducible,
)
from .symmetry import IDENTITY, Perm, act, amalgamation_checks, compose, fresh_swap, in_fix, invert, random_perm
from .towers import Coord, Tower

LEVELS, WIDTH, MAX_SEQ, MAX_BITS = 5, 6, 4, 8

T1 = Tower({Coord(1, 0): (Coord(0, 5),), Coord(2, 0): (Coord(1, 0), Coord(0, 3))})


@dataclass
class SuiteReport:
    suite: str
    cases: int
    failures: List[Tuple[int, str]] = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        d = asdict(self)
        d["failures"] = [{"seed": s, "description": msg} for s, msg in sorted(self.failures)]
        d["ok"] = self.ok
        return d

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.suite}: {self.cases} cases, {len(self.failures)} failures, {self.wall_ms:.0f} ms"


class _Collector:
    def __init__(self):
        self.failures: List[Tuple[int, str]] = []

    def check(self, cond, seed, msg):
        if not cond:
            self.failures.append((seed, msg))


def case_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


def _random_subset(rng, items, k=None):
    items = sorted(items)
    if not items:
        return frozenset()
    k = rng.randint(0, len(items)) if k is None else min(k, len(items))
    return frozenset(rng.sample(items, k))


def _stray_coords(rng, count):
    return {Coord(rng.randrange(LEVELS + 1), rng.randrange(2 * WIDTH + 2)) for _ in range(count)}


def small_towers(levels: int = 3, width: int = 2, max_seq: int = 2):
    """Every complete tower with keys on levels ``1..levels-1`` and indices below ``width``."""

    def seqs_from(pool):
        for n in range(1, min(max_seq, len(pool)) + 1):
            yield from itertools.permutations(pool, n)

    def extend(level, pool, acc):
        if level == levels:
            yield Tower(acc)
            return
        options = list(seqs_from(pool))
        for choice in itertools.product([None] + options, repeat=width):
            picked = [c for c in choice if c is not None]
            if len(set(picked)) != len(picked):
                continue
            new = dict(acc)
            keys = []
            for index, seq in enumerate(choice):
                if seq is not None:
                    new[Coord(level, index)] = seq
                    keys.append(Coord(level, index))
            yield from extend(level + 1, pool + keys, new)

    yield from extend(1, [Coord(0, i) for i in range(width)], {})


# -- closure ---------------------------------------------------------------

def _closure_checks(col, s, p, e, e2):
    t = tw.target(p)
    ce, ce2 = tw.target_of(p, e), tw.target_of(p, e2)
    col.check(tw.target_of(p, ce) == ce, s, "closure not idempotent")
    col.check(ce <= ce2, s, "closure not monotone")
    col.check((e & t) <= ce <= t, s, "closure not between e & t(p) and t(p)")
    col.check(tw.target_of(p, t) == t, s, "t(p, t(p)) != t(p)")
    for g in t:
        cg = tw.target_of(p, {g})
        for c in cg:
            if c.level > 0 and not set(p.sequents.get(c, ())) <= cg:
                col.check(False, s, f"closure of {g!r} misses the range of {c!r}")


def _union_checks(col, s, p, q, lower=None):
    try:
        u = tw.union(p, q)
    except Incompatible:
        col.check(lower is None, s, "union raised Incompatible for a pair with a common extension")
        return
    col.check(tw.leq(u, p) and tw.leq(u, q), s, "union is not a lower bound")
    col.check(tw.is_complete(u), s, "union of complete towers is not complete")
    if lower is not None:
        col.check(tw.leq(lower, u), s, "union is not the greatest lower bound")


def closure_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        r = tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s)
        t = tw.target(r)
        e = _random_subset(rng, t) | _stray_coords(rng, 2)
        e2 = e | _random_subset(rng, t)
        _closure_checks(col, s, r, e, e2)
        col.check(tw.is_complete(r), s, "generated tower is not complete")
        # two complete restrictions of r share the common extension r
        p = tw.restrict(r, tw.target_of(r, _random_subset(rng, t)))
        q = tw.restrict(r, tw.target_of(r, _random_subset(rng, t)))
        col.check(tw.is_complete(p) and tw.is_complete(q), s, "restriction to a closed set is not complete")
        _union_checks(col, s, p, q, lower=r)
        _union_checks(col, s, r, tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s + 7))
    # exhaustive: every pair e <= e2 of subsets of t(T1)
    t = sorted(tw.target(T1))
    subsets = [frozenset(c) for n in range(len(t) + 1) for c in itertools.combinations(t, n)]
    for e in subsets:
        for e2 in subsets:
            if e <= e2:
                _closure_checks(col, -1, T1, e, e2)
        _union_checks(col, -1, tw.restrict(T1, tw.target_of(T1, e)), T1, lower=T1)
    return SuiteReport("closure", cases, col.failures)


# -- extension -------------------------------------------------------------

def _add_checks(col, s, p, c):
    q = tw.add_to_target(p, c)
    kind = "condition" if isinstance(p, tw.Condition) else "tower"
    tp, tq, tc = tw.target(p), tw.target(q), tw.target_of(q, {c})
    col.check(c in tq, s, f"{c!r} not added to the target")
    col.check(tw.leq(q, p) and tw.is_complete(q), s, "add_to_target result is not a complete extension")
    col.check(tq == tp | tc and not (tp & tc), s, f"{kind}: disjoint-union equation fails for {c!r}")


def _cover_checks(col, s, p):
    q, top = tw.singleton_cover(p)
    col.check(set(q.sequents[top]) == tw.target(p), s, "cover range != t(p)")
    col.check(tw.target(q) == tw.target_of(q, {top}), s, "t(q) != t(q, {top})")
    col.check(tw.leq(q, p) and tw.is_complete(q), s, "cover is not a complete extension")


def extension_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        p = tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s)
        t = tw.target(p)
        while True:
            c = Coord(rng.randrange(LEVELS + 1), rng.randrange(2 * WIDTH))
            if c not in t:
                break
        _add_checks(col, s, p, c)
        cond = tw.random_condition(LEVELS, WIDTH, MAX_SEQ, s, MAX_BITS)
        while True:
            c = Coord(rng.randrange(LEVELS + 1), rng.randrange(2 * WIDTH))
            if c not in tw.target(cond):
                break
        _add_checks(col, s, cond, c)
        p2 = tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s + 1)
        if tw.target(p2):
            _cover_checks(col, s, p2)
    t = tw.target(T1)
    for c in itertools.product(range(4), range(10)):
        if Coord(*c) not in t:
            _add_checks(col, -1, T1, Coord(*c))
    for p in itertools.islice(small_towers(), 0, None, 25):
        if tw.target(p):
            _cover_checks(col, -1, p)
    return SuiteReport("extension", cases, col.failures)


# -- amalgamation ----------------------------------------------------------

def amalgamation_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        q = tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s)
        e = _random_subset(rng, tw.target(q), rng.randint(0, 3))
        _, _, failures = amalgamation_checks(q, e)
        for f in failures:
            col.check(False, s, f"e={sorted(e)}: {f}")
    t = sorted(tw.target(T1))
    for n in range(len(t) + 1):
        for e in itertools.combinations(t, n):
            for f in amalgamation_checks(T1, e)[2]:
                col.check(False, -1, f"T1, e={sorted(e)}: {f}")
    return SuiteReport("amalgamation", cases, col.failures)


# -- supports --------------------------------------------------------------

def _supports_checks(col, s, p, rng):
    rep = order_report(p)
    for key in ("antisymmetry_violations", "rank_violations", "closed_without_generator", "closed_with_several_generators"):
        col.check(rep[key] == 0, s, f"{key}: {rep[key]}")
    t = tw.target(p)
    a = _random_subset(rng, t)
    expected = reduce_to_irreducible(p, a)
    col.check(is_irreducible(p, expected), s, "reduction result is not irreducible")
    col.check(tw.target_of(p, expected) == tw.target_of(p, a), s, "reduction changed the closure")
    for order in random_removal_orders(a, 10, rng.randrange(1 << 30)):
        col.check(reduce_to_irreducible(p, a, order) == expected, s, "reduction depends on removal order")
    gs = [_random_subset(rng, t, rng.randint(1, 2)) for _ in range(rng.randint(1, 3))]
    c = intersection_generator(p, gs)
    inter = tw.target_of(p, gs[0])
    for g in gs[1:]:
        inter &= tw.target_of(p, g)
    col.check(tw.target_of(p, c) == inter and is_irreducible(p, c), s, "intersection generator equation fails")
    if t:
        q, _ = tw.singleton_cover(p)
        irr = enumerate_irreducibles(p)
        for x in rng.sample(irr, min(6, len(irr))):
            for y in irr:
                if gen_leq(p, x, y):
                    col.check(gen_leq(q, x, y), s, "closure-inclusion order not stable under extension")


def _small_random_tower(s):
    k = 0
    while True:
        p = tw.random_tower(4, 3, 3, s * 31 + k)
        if len(tw.target(p)) <= 10:
            return p
        k += 1


def supports_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        _supports_checks(col, s, _small_random_tower(s), random.Random(s))
    for k, p in enumerate(small_towers()):
        rep = order_report(p)
        for key in ("antisymmetry_violations", "rank_violations", "closed_without_generator", "closed_with_several_generators"):
            col.check(rep[key] == 0, -1, f"small tower #{k} {key}: {rep[key]}")
    _supports_checks(col, -1, T1, random.Random(0))
    return SuiteReport("supports", cases, col.failures)


# -- ordinals --------------------------------------------------------------

def triple_add(x, y):
    a1, b1, c1 = x
    a2, b2, c2 = y
    if a2:
        return (a1 + a2, b2, c2)
    if b2:
        return (a1, b1 + b2, c2)
    return (a1, b1, c1 + c2)


def triple_to_ordinal(x) -> od.Ordinal:
    return od.Ordinal(tuple((exp, c) for exp, c in zip((2, 1, 0), x) if c))


def random_ordinal(rng, max_exp=6, max_coef=9, max_terms=4) -> od.Ordinal:
    exps = sorted(rng.sample(range(max_exp + 1), rng.randint(0, max_terms)), reverse=True)
    return od.Ordinal(tuple((e, rng.randint(1, max_coef)) for e in exps))


def ordinals_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    flip = {"lt": "gt", "gt": "lt", "eq": "eq"}
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        a, b, c = (random_ordinal(rng) for _ in range(3))
        col.check(od.ord_add(od.ord_add(a, b), c) == od.ord_add(a, od.ord_add(b, c)), s, "addition not associative")
        col.check(od.ord_cmp(a, b) == flip[od.ord_cmp(b, a)], s, "comparison not antisymmetric")
        col.check((od.ord_cmp(a, b) == "eq") == (a == b), s, "eq disagrees with equality")
        if od.ord_cmp(a, b) != "gt" and od.ord_cmp(b, c) != "gt":
            col.check(od.ord_cmp(a, c) != "gt", s, "comparison not transitive")
        lo, hi = sorted((b, c))
        if lo != hi:
            col.check(od.ord_add(a, lo) < od.ord_add(a, hi), s, "right addition not strictly monotone")
        lo, hi = sorted((a, b))
        col.check(od.ord_add(lo, c) <= od.ord_add(hi, c), s, "left addition not weakly monotone")
        col.check(od.parse(od.render(a)) == a, s, "render/parse round trip fails")
    triples = list(itertools.product(range(5), repeat=3))
    for x in triples:
        ox = triple_to_ordinal(x)
        for y in triples:
            oy = triple_to_ordinal(y)
            col.check(od.ord_add(ox, oy) == triple_to_ordinal(triple_add(x, y)), -1, f"addition disagrees with oracle at {x}+{y}")
            expect = "lt" if x < y else "gt" if x > y else "eq"
            col.check(od.ord_cmp(ox, oy) == expect, -1, f"comparison disagrees with oracle at {x},{y}")
    return SuiteReport("ordinals", cases, col.failures)


# -- evaluation ------------------------------------------------------------

def _lex_laws(col, s, v, w, x):
    flip = {"lt": "gt", "gt": "lt", "eq": "eq"}
    col.check(lex_compare(v, w) == flip[lex_compare(w, v)], s, "lex_compare not antisymmetric")
    col.check((lex_compare(v, w) == "eq") == (v == w), s, "lex_compare eq disagrees with equality")
    if lex_compare(v, w) != "gt" and lex_compare(w, x) != "gt":
        col.check(lex_compare(v, x) != "gt", s, "lex_compare not transitive")


def evaluation_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        p = tw.random_condition(LEVELS, WIDTH, MAX_SEQ, s, MAX_BITS) if rng.random() < 0.5 else tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s)
        t = sorted(tw.target(p))
        _lex_laws(col, s, *(random_value(rng) for _ in range(3)))
        if not t:
            continue
        a = random_assignment(p, s, MAX_BITS)
        src = rng.choice(t)
        reach = sorted(tw.target_of(p, {src}))
        dst = rng.choice(reach)
        path = access_path(p, src, dst)
        col.check(index_path(evaluate(p, a, src), path) == evaluate(p, a, dst), s, "path/evaluation coherence fails")
        outside = [c for c in t if c not in reach]
        if outside:
            try:
                access_path(p, src, rng.choice(outside))
                col.check(False, s, "access_path found a path outside the closure")
            except NoPath:
                pass
        if src.level > 0:
            seq = tw.tower_part(p).sequents[src]
            col.check(len(set(seq)) == len(seq), s, "children of an evaluated coord are not distinct coords")
        pi = random_perm(LEVELS, WIDTH, s)
        col.check(
            evaluate(act(pi, p), relocate(pi, a), pi(src)) == evaluate(p, a, src), s, "evaluate not equivariant"
        )
        if src.level > 0 and any(c.level == 0 for c in reach):
            a2 = {c: b for c, b in a.items() if c not in reach}
            if isinstance(p, tw.Condition):
                p = p.tower
            try:
                evaluate(p, a2, src)
                col.check(False, s, "missing assignment not detected")
            except MissingAssignment:
                pass
    leaves = ["", "0", "1", "00", "01", "10", "11"]
    values = leaves + [tuple(v) for n in range(3) for v in itertools.product(leaves[:3], repeat=n)]
    values += [((), ), (("0",), "1"), ("1", ("0",))]
    for v, w, x in itertools.product(values, repeat=3):
        _lex_laws(col, -1, v, w, x)
    for p in itertools.islice(small_towers(), 0, None, 50):
        a = random_assignment(p, 0)
        for src in tw.target(p):
            for dst in tw.target_of(p, {src}):
                col.check(index_path(evaluate(p, a, src), access_path(p, src, dst)) == evaluate(p, a, dst), -1,
                          "path/evaluation coherence fails on a small tower")
    return SuiteReport("evaluation", cases, col.failures)


# -- symmetry --------------------------------------------------------------

def _sym_checks(col, s, pi, sigma, p, e):
    col.check(act(pi, tw.target_of(p, e)) == tw.target_of(act(pi, p), act(pi, e)), s, "closure not equivariant")
    col.check(act(pi, tw.target(p)) == tw.target(act(pi, p)), s, "target not equivariant")
    conj = compose(pi, compose(sigma, invert(pi)))
    col.check(in_fix(conj, act(pi, e)) == in_fix(sigma, e), s, "conjugation law fails")
    col.check(tw.is_complete(act(pi, p)) == tw.is_complete(p), s, "action changed completeness")


def symmetry_suite(cases: int, seed: int = 0) -> SuiteReport:
    col = _Collector()
    for i in range(cases):
        s = case_seed(seed, i)
        rng = random.Random(s)
        p = tw.random_condition(LEVELS, WIDTH, MAX_SEQ, s, MAX_BITS) if rng.random() < 0.3 else tw.random_tower(LEVELS, WIDTH, MAX_SEQ, s)
        pi = random_perm(LEVELS + 1, WIDTH, rng.randrange(1 << 30))
        e = _random_subset(rng, tw.target(p), rng.randint(0, 4)) | _stray_coords(rng, rng.randint(0, 2))
        sigma = random_perm(LEVELS + 1, WIDTH, rng.randrange(1 << 30))
        if rng.random() < 0.5:
            # restrict sigma to points outside e so in_fix(sigma, e) also gets exercised when true
            sigma = Perm({lv: {a: b for a, b in m.items()} for lv, m in sigma.levels.items()
                          if not any(c.level == lv for c in e)})
        _sym_checks(col, s, pi, sigma, p, e)
        x = Coord(rng.randrange(LEVELS), rng.randrange(2 * WIDTH))
        col.check(act(compose(pi, sigma), x) == act(pi, act(sigma, x)), s, "compose does not act as composition")
        col.check(act(invert(pi), act(pi, p)) == p, s, "invert does not undo the action")
        col.check(compose(pi, invert(pi)) == IDENTITY, s, "pi . pi^-1 != id")
        tau = random_perm(LEVELS + 1, WIDTH, rng.randrange(1 << 30))
        col.check(compose(compose(pi, sigma), tau) == compose(pi, compose(sigma, tau)), s, "compose not associative")
        q = p if isinstance(p, Tower) else p.tower
        fixed = tw.target_of(q, _random_subset(rng, tw.target(q), rng.randint(0, 3)))
        f = fresh_swap(q, fixed)
        col.check(compose(f, f) == IDENTITY, s, "fresh swap is not an involution")
        col.check(in_fix(f, fixed), s, "fresh swap moves the fixed set")
        col.check(act(f, tw.target(q)) & tw.target(q) == fixed, s, "fresh swap image meets t(q) outside the fixed set")
    perms = [Perm({0: dict(zip(range(3), a)), 1: dict(zip(range(3), b))})
             for a in itertools.permutations(range(3)) for b in itertools.permutations(range(3))]
    t = sorted(tw.target(T1) | {Coord(0, 0), Coord(1, 1)})
    subsets = [frozenset(c) for n in range(3) for c in itertools.combinations(t, n)]
    for pi in perms:
        for sigma in perms:
            for e in subsets:
                col.check(in_fix(compose(pi, compose(sigma, invert(pi))), act(pi, e)) == in_fix(sigma, e), -1,
                          "conjugation law fails (exhaustive)")
        for e in subsets:
            col.check(act(pi, tw.target_of(T1, e)) == tw.target_of(act(pi, T1), act(pi, e)), -1,
                      "closure not equivariant (exhaustive)")
    return SuiteReport("symmetry", cases, col.failures)


SUITES: Dict[str, Callable[[int, int], SuiteReport]] = {
    "closure": closure_suite,
    "extension": extension_suite,
    "amalgamation": amalgamation_suite,
    "supports": supports_suite,
    "ordinals": ordinals_suite,
    "evaluation": evaluation_suite,
    "symmetry": symmetry_suite,
}


def run_suite(name: str, cases: int, seed: int = 0) -> SuiteReport:
    start = time.perf_counter()
    report = SUITES[name](cases, seed)
    report.wall_ms = (time.perf_counter() - start) * 1000.0
    report.failures.sort()
    return report
