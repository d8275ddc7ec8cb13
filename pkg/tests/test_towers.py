import json

import pytest
from hypothesis import given, strategies as st

from hadtowers.errors import Incompatible, InvalidTower, PreconditionError
from hadtowers.towers import (
    Condition,
    Coord,
    Tower,
    add_to_target,
    coords_from_json,
    coords_to_json,
    is_complete,
    leq,
    random_condition,
    random_tower,
    restrict,
    singleton_cover,
    target,
    target_of,
    tower_from_json,
    tower_to_json,
    union,
)

C = Coord
seeds = st.integers(0, 10**6)


def _scan_target(p):
    out = set()
    for k, seq in p.sequents.items():
        out.add(k)
        for c in seq:
            out.add(c)
    return out


def _descend(p, e):
    # recursive-descent oracle for the closure
    t = _scan_target(p)
    out = set()

    def visit(c):
        if c in out:
            return
        out.add(c)
        for child in p.sequents.get(c, ()) if c.level else ():
            visit(child)

    for c in e:
        if c in t:
            visit(c)
    return out


def _valid(p):
    for k, seq in p.sequents.items():
        assert k.level >= 1 and seq and len(set(seq)) == len(seq)
        assert all(c.level < k.level for c in seq)
    pairs = [(k.level, seq) for k, seq in p.sequents.items()]
    assert len(set(pairs)) == len(pairs)
    return True


def test_target_examples(t1):
    assert target(t1) == {C(1, 0), C(2, 0), C(0, 5), C(0, 3)} == _scan_target(t1)
    assert target(Tower()) == frozenset()
    assert target(Condition({7: "01"}, t1)) == {C(0, 7)} | target(t1)


def test_target_of_examples(t1):
    assert target_of(t1, {C(2, 0)}) == {C(2, 0), C(1, 0), C(0, 3), C(0, 5)} == _descend(t1, {C(2, 0)})
    assert target_of(t1, {C(0, 3)}) == {C(0, 3)}
    assert target_of(t1, target(t1)) == target(t1)
    assert target_of(t1, {C(9, 9)}) == frozenset()


def test_condition_closure_includes_cohen_coords(t1):
    p = Condition({7: "01"}, t1)
    assert target_of(p, {C(0, 7), C(1, 0)}) == {C(0, 7), C(1, 0), C(0, 5)}


def test_is_complete_examples(t1):
    assert is_complete(t1)
    assert not is_complete(Tower({C(2, 0): (C(1, 4), C(0, 3))}))
    assert is_complete(Tower())


def test_leq_examples(t1):
    assert leq(t1, t1)
    assert leq(t1, Tower())
    smaller = Tower({C(1, 0): (C(0, 5),)})
    assert not leq(smaller, t1)
    assert leq(t1, smaller)


def test_leq_cohen():
    p = Condition({1: "01"})
    assert leq(Condition({1: "011"}), p)
    assert not leq(Condition({1: "1"}), p)
    assert not leq(Condition({2: "01"}), p)


def test_union_examples(t1):
    assert union(t1, t1) == t1
    with pytest.raises(Incompatible, match="same-level distinctness"):
        union(t1, Tower({C(1, 1): (C(0, 5),)}))
    u = union(t1, Tower({C(3, 0): (C(2, 0),)}))
    assert len(u) == 3 and _valid(u)
    with pytest.raises(Incompatible, match="function"):
        union(t1, Tower({C(1, 0): (C(0, 4),)}))


def test_union_cohen():
    u = union(Condition({1: "01"}), Condition({1: "011", 2: "1"}))
    assert u.cohen == {1: "011", 2: "1"}
    with pytest.raises(Incompatible, match="bitstring"):
        union(Condition({1: "01"}), Condition({1: "1"}))


def test_invariants_enforced():
    with pytest.raises(InvalidTower, match="owner-level"):
        Tower({C(1, 0): (C(1, 1),)})
    with pytest.raises(InvalidTower, match="injectivity"):
        Tower({C(2, 0): (C(0, 1), C(0, 1))})
    with pytest.raises(InvalidTower, match="nonempty"):
        Tower({C(1, 0): ()})
    with pytest.raises(InvalidTower, match="key level"):
        Tower({C(0, 0): (C(0, 1),)})
    with pytest.raises(InvalidTower, match="bitstring"):
        Condition({0: "012"})


def test_add_to_target_examples(t1):
    q = add_to_target(t1, C(0, 9))
    assert q.sequents == {**t1.sequents, C(1, 1): (C(0, 9),)}
    q = add_to_target(t1, C(3, 0))
    assert q.sequents == {**t1.sequents, C(3, 0): (C(0, 0),)}
    with pytest.raises(PreconditionError):
        add_to_target(t1, C(0, 5))
    with pytest.raises(PreconditionError, match="complete"):
        add_to_target(Tower({C(2, 0): (C(1, 4),)}), C(0, 0))


def test_add_to_target_level0_tower_breaks_disjoint_union(t1):
    # the new level-1 key is neither in t(p) nor in t(q, {c})
    c = C(0, 9)
    q = add_to_target(t1, c)
    assert target(q) == target(t1) | {c, C(1, 1)}
    assert target_of(q, {c}) == {c}


def test_add_to_target_condition_level0(t1):
    p = Condition({5: "1"}, t1)
    q = add_to_target(p, C(0, 9))
    assert q.cohen == {5: "1", 9: ""} and q.tower == t1
    assert target(q) == target(p) | target_of(q, {C(0, 9)})


@given(seeds, st.integers(0, 5), st.integers(0, 12))
def test_add_to_target_disjoint_union_above_level0(seed, level, index):
    p = random_tower(5, 6, 4, seed)
    c = C(level, index)
    if c in target(p):
        return
    q = add_to_target(p, c)
    tq, tc = target(q), target_of(q, {c})
    assert leq(q, p) and is_complete(q) and c in tq
    if level > 0:
        assert tq == target(p) | tc and not target(p) & tc


@given(seeds, st.integers(0, 5), st.integers(0, 12))
def test_add_to_target_condition_disjoint_union(seed, level, index):
    p = random_condition(5, 6, 4, seed)
    c = C(level, index)
    if c in target(p):
        return
    q = add_to_target(p, c)
    tq, tc = target(q), target_of(q, {c})
    assert tq == target(p) | tc and not target(p) & tc


def test_singleton_cover_example(t1):
    q, top = singleton_cover(t1)
    assert top == C(3, 0)
    assert q.sequents[top] == (C(0, 3), C(0, 5), C(1, 0), C(2, 0))
    assert leq(q, t1)
    with pytest.raises(PreconditionError):
        singleton_cover(Tower())


@given(seeds)
def test_singleton_cover_equations(seed):
    p = random_tower(5, 6, 4, seed)
    if not target(p):
        return
    q, top = singleton_cover(p)
    assert set(q.sequents[top]) == target(p)
    assert target(q) == target_of(q, {top})
    assert leq(q, p) and is_complete(q)


def test_random_tower_contract():
    assert random_tower(1, 4, 3, 0) == Tower()
    assert random_tower(5, 6, 4, 3) == random_tower(5, 6, 4, 3)
    p = random_tower(5, 6, 4, 7)
    assert _valid(p) and is_complete(p)
    assert all(k.level < 5 and k.index < 6 and len(s) <= 4 for k, s in p.sequents.items())
    with pytest.raises(ValueError):
        random_tower(0, 4, 3, 0)


@given(seeds, st.data())
def test_closure_laws(seed, data):
    p = random_tower(5, 6, 4, seed)
    t = sorted(target(p))
    e = set(data.draw(st.lists(st.sampled_from(t), max_size=5))) if t else set()
    e2 = e | (set(data.draw(st.lists(st.sampled_from(t), max_size=5))) if t else set())
    ce = target_of(p, e)
    assert ce == _descend(p, e)
    assert target_of(p, ce) == ce
    assert ce <= target_of(p, e2)
    assert target_of(p, target(p)) == target(p)
    for g in t:
        cg = target_of(p, {g})
        assert all(set(p.sequents[c]) <= cg for c in cg if c.level)


@given(seeds, st.data())
def test_union_is_glb(seed, data):
    r = random_tower(5, 6, 4, seed)
    t = sorted(target(r))
    pick = st.lists(st.sampled_from(t), max_size=4) if t else st.just([])
    p = restrict(r, target_of(r, data.draw(pick)))
    q = restrict(r, target_of(r, data.draw(pick)))
    u = union(p, q)
    assert leq(u, p) and leq(u, q) and leq(r, u)
    assert is_complete(u)


def test_json_round_trip(t1):
    text = json.dumps(tower_to_json(t1), separators=(",", ":"))
    assert text == '{"sequents":[{"level":1,"index":0,"range":[[0,5]]},{"level":2,"index":0,"range":[[1,0],[0,3]]}]}'
    assert tower_from_json(json.loads(text)) == t1
    cond = Condition({5: "0110"}, t1)
    assert tower_to_json(cond)["cohen"] == [{"index": 5, "bits": "0110"}]
    assert tower_from_json(tower_to_json(cond)) == cond
    assert coords_from_json(coords_to_json(target(t1))) == target(t1)


@pytest.mark.parametrize(
    "obj, invariant",
    [
        ({"sequents": [{"level": 1, "index": 0, "range": [[1, 0]]}]}, "owner-level bound"),
        ({"sequents": [{"level": 1, "index": 0, "range": [[0, 1]]}, {"level": 1, "index": 1, "range": [[0, 1]]}]}, "same-level distinctness"),
        ({"sequents": [{"level": 2, "index": 0, "range": [[0, 1], [0, 1]]}]}, "injectivity"),
        ({"sequents": [{"level": 1, "index": 0, "range": []}]}, "nonempty sequent"),
        ({"sequents": [], "cohen": [{"index": 0, "bits": "2"}]}, "bitstring"),
        ({"nope": 1}, "format"),
    ],
)
def test_decoder_names_invariant(obj, invariant):
    with pytest.raises(InvalidTower) as info:
        tower_from_json(obj)
    assert info.value.invariant == invariant
