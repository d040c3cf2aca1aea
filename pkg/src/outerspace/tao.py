"""Translation lengths on a one-parameter family of boundary trees of rank 2.

The graph of groups has two vertices, both with group ``<a>``, joined by an
edge ``e`` carrying ``<a>`` (identity boundary maps) and an edge ``f`` with
trivial group.  Identifying ``b`` with the loop ``e f^-1`` realises ``F(a, b)``
inside ``G = <a, e> * <f>`` with ``a`` and ``e`` commuting.  Lifts of ``e``
have length ``t`` and lifts of ``f`` length ``1 - t``.

The length of ``w`` is read off a cyclically reduced free-product normal
form of its image in ``G``: ``t`` per unit of ``e``-exponent in the abelian
syllables plus ``1 - t`` per unit of ``f``-exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .words import WordError


@dataclass(frozen=True)
class TaoTreePoint:
    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        if not 0 < t < 1:
            raise ValueError(f"t must lie strictly between 0 and 1, got {t}")
        object.__setattr__(self, "t", t)


# syllables: ("Z2", (a_exp, e_exp)) or ("F", f_exp)


def _push(stack: list, syl) -> None:
    kind, val = syl
    if stack and stack[-1][0] == kind:
        _, top = stack.pop()
        merged = _merge(kind, top, val)
        if not _is_trivial(kind, merged):
            stack.append((kind, merged))
    elif not _is_trivial(kind, val):
        stack.append(syl)


def _merge(kind, x, y):
    if kind == "F":
        return x + y
    return (x[0] + y[0], x[1] + y[1])


def _is_trivial(kind, val) -> bool:
    return val == 0 if kind == "F" else val == (0, 0)


def free_product_form(w: Sequence[int]) -> list:
    """Reduced syllable sequence of the image of ``w`` in ``<a, e> * <f>``."""
    stack: list = []
    for x in w:
        if abs(x) == 1:
            _push(stack, ("Z2", (x, 0)))
        elif x == 2:
            _push(stack, ("Z2", (0, 1)))
            _push(stack, ("F", -1))
        elif x == -2:
            _push(stack, ("F", 1))
            _push(stack, ("Z2", (0, -1)))
        else:
            raise WordError(f"letter {x} is outside F(a, b)")
    return stack


def cyclic_free_product_form(w: Sequence[int]) -> list:
    syls = free_product_form(w)
    while len(syls) >= 2 and syls[0][0] == syls[-1][0]:
        kind, last = syls.pop()
        first = syls.pop(0)[1]
        merged = _merge(kind, last, first)
        if not _is_trivial(kind, merged):
            syls.insert(0, (kind, merged))
    return syls


def tao_length(point: TaoTreePoint | Fraction, w: Sequence[int]) -> Fraction:
    t = point.t if isinstance(point, TaoTreePoint) else TaoTreePoint(point).t
    syls = cyclic_free_product_form(w)
    if len(syls) <= 1:
        return Fraction(0)
    e_count = sum(abs(v[1]) for k, v in syls if k == "Z2")
    f_count = sum(abs(v) for k, v in syls if k == "F")
    return t * e_count + (1 - t) * f_count
