"""Bitmask kernels for closures over a fixed, indexed target.

Coordinates of a target are numbered ``0..n-1`` in canonical order and a
subset is a ``uint64`` mask, so ``n`` is limited to 64.  Each kernel has a
numba implementation and a pure numpy one.  Set ``HADTOWERS_DISABLE_NUMBA=1``
to force the numpy path; it is also used when numba cannot be imported.
"""
import os

import numpy as np

MAX_BITS = 64

_disabled = os.environ.get("HADTOWERS_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by HADTOWERS_DISABLE_NUMBA")
    import numba
except ImportError:
    numba = None

BACKEND = "numba" if numba is not None else "numpy"


# -- numpy implementations -------------------------------------------------

def singleton_closures_np(children):
    # children[i] is the range mask of coord i; ranges only point to
    # lower-indexed coords because canonical order sorts by level first.
    n = children.shape[0]
    out = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        acc = np.uint64(1) << np.uint64(i)
        kids = int(children[i])
        while kids:
            low = kids & -kids
            acc |= out[low.bit_length() - 1]
            kids ^= low
        out[i] = acc
    return out


def subset_closures_np(single):
    n = single.shape[0]
    out = np.zeros(1, dtype=np.uint64)
    for i in range(n):
        out = np.concatenate([out, out | single[i]])
    return out


def irreducible_flags_np(closures, n):
    idx = np.arange(closures.shape[0], dtype=np.uint64)
    flags = np.ones(closures.shape[0], dtype=np.bool_)
    for i in range(n):
        bit = np.uint64(1) << np.uint64(i)
        has = (idx & bit) != 0
        dropped = closures[(idx & ~bit).astype(np.int64)]
        flags &= ~(has & (dropped == closures))
    return flags


def order_violations_np(masks, closures, positions):
    # Pairs (a, b), a != b, with closure(a) <= closure(b): require
    # positions[a] < positions[b] and closure(a) != closure(b).
    sub = (closures[:, None] & ~closures[None, :]) == 0
    np.fill_diagonal(sub, False)
    same = closures[:, None] == closures[None, :]
    np.fill_diagonal(same, False)
    bad_rank = sub & ~(positions[:, None] < positions[None, :])
    return int(same.sum()), int(bad_rank.sum())


# -- numba implementations -------------------------------------------------

if numba is not None:
    _opts = {"cache": True, "nogil": True}

    @numba.njit(**_opts)
    def singleton_closures_nb(children):
        n = children.shape[0]
        out = np.zeros(n, dtype=np.uint64)
        one = np.uint64(1)
        for i in range(n):
            acc = one << np.uint64(i)
            kids = children[i]
            for j in range(i):
                if (kids >> np.uint64(j)) & one:
                    acc |= out[j]
            out[i] = acc
        return out

    @numba.njit(**_opts)
    def subset_closures_nb(single):
        n = single.shape[0]
        size = 1 << n
        out = np.zeros(size, dtype=np.uint64)
        for s in range(1, size):
            low = s & -s
            i = 0
            while (low >> i) != 1:
                i += 1
            out[s] = out[s ^ low] | single[i]
        return out

    @numba.njit(**_opts)
    def irreducible_flags_nb(closures, n):
        size = closures.shape[0]
        flags = np.ones(size, dtype=np.bool_)
        for s in range(size):
            for i in range(n):
                bit = 1 << i
                if s & bit and closures[s ^ bit] == closures[s]:
                    flags[s] = False
                    break
        return flags

    @numba.njit(**_opts)
    def order_violations_nb(masks, closures, positions):
        m = closures.shape[0]
        same = 0
        bad_rank = 0
        for a in range(m):
            ca = closures[a]
            for b in range(m):
                if a == b:
                    continue
                cb = closures[b]
                if ca & ~cb == 0:
                    if ca == cb:
                        same += 1
                    if not positions[a] < positions[b]:
                        bad_rank += 1
        return same, bad_rank


def _pick(name):
    if numba is not None:
        return globals()[name + "_nb"]
    return globals()[name + "_np"]


def singleton_closures(children):
    return _pick("singleton_closures")(np.ascontiguousarray(children, dtype=np.uint64))


def subset_closures(single):
    return _pick("subset_closures")(np.ascontiguousarray(single, dtype=np.uint64))


def irreducible_flags(closures, n):
    return _pick("irreducible_flags")(np.ascontiguousarray(closures, dtype=np.uint64), n)


def order_violations(masks, closures, positions):
    """Return ``(antisymmetry_violations, rank_violations)`` over all pairs."""
    same, bad = _pick("order_violations")(
        np.ascontiguousarray(masks, dtype=np.uint64),
        np.ascontiguousarray(closures, dtype=np.uint64),
        np.ascontiguousarray(positions, dtype=np.int64),
    )
    return int(same), int(bad)
