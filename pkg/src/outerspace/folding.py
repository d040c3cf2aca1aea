"""Stallings folding of a wedge of labeled loops.

Each input word ``u_i`` becomes a loop at the basepoint.  Every edge also
carries a *voltage*: a word over the symbols ``x_1..x_N`` (one per input
word), initialised so that reading voltages around the ``i``-th loop gives
``x_i``.  Before two edges are identified, the voltages around their far
endpoint are conjugated so the two edges agree; this is the graph form of
a Nielsen move and it never changes the voltage of a basepoint loop.

If the words form a free basis of ``F_N`` the folded graph is the
single-vertex rose, and the voltage on the petal labeled ``a_j`` spells
``a_j`` as a word in the ``u_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .words import Word, concat, invert_word, reduce


@dataclass(frozen=True)
class Fold:
    vertex: int
    letter: int
    kept_edge: int
    removed_edge: int
    eliminated_vertex: int | None
    conjugator: Word


@dataclass(frozen=True)
class FoldResult:
    is_basis: bool
    # a_j written over the input words, when is_basis holds
    generator_words: tuple[Word, ...] | None
    folds: tuple[Fold, ...] = field(default=(), repr=False)
    reason: str = ""


def fold_words(words: Sequence[Sequence[int]], rank: int | None = None) -> FoldResult:
    words = [reduce(w) for w in words]
    n = len(words) if rank is None else rank
    if len(words) != n:
        return FoldResult(False, None, reason=f"expected {n} words, got {len(words)}")
    for i, w in enumerate(words):
        if not w:
            return FoldResult(False, None, reason=f"word {i} is trivial")
        if any(abs(x) > n for x in w):
            return FoldResult(False, None, reason=f"word {i} uses a letter beyond rank {n}")

    # edges[e] = [src, letter, dst, voltage]; letter may be negative
    edges: dict[int, list] = {}
    vertices = {0}
    next_vertex = 1
    for i, w in enumerate(words):
        path = [0]
        for _ in range(len(w) - 1):
            path.append(next_vertex)
            vertices.add(next_vertex)
            next_vertex += 1
        path.append(0)
        for k, x in enumerate(w):
            volt = (i + 1,) if k == len(w) - 1 else ()
            edges[len(edges)] = [path[k], x, path[k + 1], volt]

    folds: list[Fold] = []
    while True:
        found = _find_fold(edges)
        if found is None:
            break
        v, x, (e1, d1), (e2, d2) = found
        w1 = _far_end(edges[e1], d1)
        w2 = _far_end(edges[e2], d2)
        x1 = _voltage(edges[e1], d1)
        x2 = _voltage(edges[e2], d2)
        if w1 == w2:
            # identifying parallel edges kills the loop e1 e2^-1
            return FoldResult(False, None, tuple(folds), reason="folding lost rank")
        # eliminate whichever far endpoint is not the basepoint
        if w2 == 0:
            e1, d1, e2, d2, w1, w2, x1, x2 = e2, d2, e1, d1, w2, w1, x2, x1
        c = concat(invert_word(x2), x1)
        if c:
            _coboundary(edges, w2, c)
        del edges[e2]
        for edge in edges.values():
            if edge[0] == w2:
                edge[0] = w1
            if edge[2] == w2:
                edge[2] = w1
        vertices.discard(w2)
        folds.append(Fold(v, x, e1, e2, w2, c))

    if len(vertices) != 1:
        return FoldResult(False, None, tuple(folds), reason="folded graph is not a rose")
    petals: dict[int, Word] = {}
    for src, letter, dst, volt in edges.values():
        if letter < 0:
            letter, volt = -letter, invert_word(volt)
        petals[letter] = volt
    if len(edges) != n or sorted(petals) != list(range(1, n + 1)):
        return FoldResult(False, None, tuple(folds), reason="words do not generate")
    gen_words = tuple(petals[j] for j in range(1, n + 1))
    return FoldResult(True, gen_words, tuple(folds))


def fold_basis_check(words: Sequence[Sequence[int]], rank: int | None = None) -> bool:
    return fold_words(words, rank).is_basis


def _far_end(edge: list, direction: int) -> int:
    return edge[2] if direction > 0 else edge[0]


def _voltage(edge: list, direction: int) -> Word:
    return edge[3] if direction > 0 else invert_word(edge[3])


def _coboundary(edges: dict[int, list], u: int, c: Word) -> None:
    ci = invert_word(c)
    for edge in edges.values():
        if edge[0] == u:
            edge[3] = concat(ci, edge[3])
        if edge[2] == u:
            edge[3] = concat(edge[3], c)


def _find_fold(edges: dict[int, list]):
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for e, (src, letter, dst, _) in edges.items():
        for key, half in (((src, letter), (e, 1)), ((dst, -letter), (e, -1))):
            other = seen.get(key)
            if other is not None and other[0] != e:
                return key[0], key[1], other, half
            seen[key] = half
    return None
