"""Finite tower combinatorics: closures, permutation actions, supports."""
from ._kernels import BACKEND
from .ordinals import Ordinal, ord_add, ord_cmp, ord_of
from .towers import (
    Condition,
    Coord,
    Tower,
    add_to_target,
    is_complete,
    leq,
    random_condition,
    random_tower,
    singleton_cover,
    target,
    target_of,
    union,
)

__version__ = "0.1.0"
