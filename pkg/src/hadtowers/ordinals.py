"""Cantor normal form ordinals below w^w.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents and positive coefficients.  The empty tuple
is zero.  Because the representation is canonical, structural equality is
ordinal equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Literal, Tuple

Cmp = Literal["lt", "eq", "gt"]

_TERM_RE = re.compile(r"^(?:(w)(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for term in self.terms:
            if len(term) != 2:
                raise ValueError(f"malformed term {term!r}")
            exp, coef = term
            if exp < 0:
                raise ValueError(f"negative exponent {exp}")
            if coef < 1:
                raise ValueError(f"invalid coefficient {coef}")
            if prev is not None and exp >= prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp
        object.__setattr__(self, "terms", tuple((int(e), int(c)) for e, c in self.terms))

    def __add__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_add(self, other)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_cmp(self, other) == "lt"

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return render(self)

    @property
    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0


ZERO = Ordinal()


def ord_of(exponent: int, coefficient: int) -> Ordinal:
    """The single-term ordinal ``w^exponent * coefficient``."""
    if coefficient < 1:
        raise ValueError(f"invalid coefficient {coefficient}: must be >= 1")
    return Ordinal(((exponent, coefficient),))


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead, lead_coef = b.terms[0]
    kept = [t for t in a.terms if t[0] > lead]
    same = [c for e, c in a.terms if e == lead]
    if same:
        return Ordinal(tuple(kept) + ((lead, same[0] + lead_coef),) + b.terms[1:])
    return Ordinal(tuple(kept) + b.terms)


def ord_sum(values: Iterable[Ordinal]) -> Ordinal:
    total = ZERO
    for v in values:
        total = ord_add(total, v)
    return total


def ord_cmp(a: Ordinal, b: Ordinal) -> Cmp:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea != eb:
            return "gt" if ea > eb else "lt"
        if ca != cb:
            return "gt" if ca > cb else "lt"
    if len(a.terms) == len(b.terms):
        return "eq"
    return "gt" if len(a.terms) > len(b.terms) else "lt"


def render(a: Ordinal) -> str:
    """Render as e.g. ``w^2*3 + w*1 + 4``; zero renders as ``0``."""
    if not a.terms:
        return "0"
    parts = []
    for exp, coef in a.terms:
        if exp == 0:
            parts.append(str(coef))
            continue
        base = "w" if exp == 1 else f"w^{exp}"
        parts.append(base if coef == 1 else f"{base}*{coef}")
    return " + ".join(parts)


def parse(text: str) -> Ordinal:
    """Inverse of :func:`render`.  ``w`` alone means ``w^1*1``.

    Terms must already be in normal form (strictly decreasing exponents);
    anything else is rejected rather than normalised, so that parsing is an
    exact inverse of rendering.
    """
    text = text.strip()
    if text == "0":
        return ZERO
    if not text:
        raise ValueError("empty ordinal expression")
    terms = []
    for raw in text.split("+"):
        m = _TERM_RE.match(raw.strip())
        if not m:
            raise ValueError(f"cannot parse ordinal term {raw.strip()!r}")
        if m.group(4) is not None:
            terms.append((0, int(m.group(4))))
        else:
            exp = int(m.group(2)) if m.group(2) is not None else 1
            coef = int(m.group(3)) if m.group(3) is not None else 1
            terms.append((exp, coef))
    return Ordinal(tuple(terms))
