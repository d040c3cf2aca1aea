"""Finite-depth coordinates of rational geodesic currents.

A counting current is recorded by its cylinder weights: for each reduced
word ``v`` of length at most ``depth``, the number of cyclic positions of
``g`` (and of ``g^-1``) at which ``v`` can be read.  Patterns longer than the
cyclic word wrap around it as often as needed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .automorphisms import Automorphism, apply, is_primitive
from .graphs import MarkedMetricGraph, translation_length
from .words import (
    Word,
    WordError,
    cyclic_reduce,
    enumerate_cyclic_words,
    format_word,
    invert_word,
    letters_of_rank,
    word_key,
)


class CurrentError(ValueError):
    pass


class WordTooLong(RuntimeError):
    pass


@dataclass(frozen=True)
class CurrentCoords:
    """Cylinder weights up to a fixed depth; missing words have weight 0."""

    rank: int
    depth: int
    weights: dict[Word, Fraction] = field(hash=False)

    def __post_init__(self):
        if self.depth < 1:
            raise CurrentError("depth must be >= 1")
        clean = {v: Fraction(c) for v, c in self.weights.items() if c}
        object.__setattr__(self, "weights", clean)

    def __getitem__(self, v: Sequence[int]) -> Fraction:
        return self.weights.get(tuple(v), Fraction(0))

    def level(self, k: int) -> dict[Word, Fraction]:
        return {v: c for v, c in self.weights.items() if len(v) == k}

    def is_zero(self) -> bool:
        return not self.weights

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["word", "weight"])
        for v in sorted(self.weights, key=lambda v: (len(v), word_key(v))):
            writer.writerow([format_word(v), str(self.weights[v])])
        return buf.getvalue()


def _cyclic_core(g: Sequence[int]) -> Word:
    try:
        core, _ = cyclic_reduce(g)
    except WordError:
        raise CurrentError("the identity has no counting current") from None
    return core


def _occurrences(core: Word, v: Sequence[int]) -> int:
    n, m = len(core), len(v)
    count = 0
    for i in range(n):
        if all(core[(i + j) % n] == v[j] for j in range(m)):
            count += 1
    return count


def cylinder_weight(g: Sequence[int], v: Sequence[int]) -> int:
    """Weight of the cylinder ``v`` in the counting current of ``g``."""
    core = _cyclic_core(g)
    v = tuple(v)
    return _occurrences(core, v) + _occurrences(invert_word(core), v)


def counting_coords(g: Sequence[int], depth: int, rank: int | None = None) -> CurrentCoords:
    core = _cyclic_core(g)
    if rank is None:
        rank = max(abs(x) for x in core)
    weights: dict[Word, int] = {}
    for word in (core, invert_word(core)):
        n = len(word)
        ext = word * (depth // n + 2)
        for i in range(n):
            for k in range(1, depth + 1):
                v = ext[i : i + k]
                weights[v] = weights.get(v, 0) + 1
    return CurrentCoords(rank, depth, {v: Fraction(c) for v, c in weights.items()})


def _same_shape(mu: CurrentCoords, nu: CurrentCoords) -> None:
    if mu.rank != nu.rank or mu.depth != nu.depth:
        raise CurrentError(
            f"shape mismatch: rank/depth {mu.rank}/{mu.depth} vs {nu.rank}/{nu.depth}"
        )


def add(mu: CurrentCoords, nu: CurrentCoords) -> CurrentCoords:
    _same_shape(mu, nu)
    out = dict(mu.weights)
    for v, c in nu.weights.items():
        out[v] = out.get(v, Fraction(0)) + c
    return CurrentCoords(mu.rank, mu.depth, out)


def scale(mu: CurrentCoords, c) -> CurrentCoords:
    c = Fraction(c)
    if c < 0:
        raise CurrentError("currents scale by nonnegative factors only")
    return CurrentCoords(mu.rank, mu.depth, {v: w * c for v, w in mu.weights.items()})


def total_mass(mu: CurrentCoords) -> Fraction:
    """Sum of the depth-1 weights over positive letters."""
    return sum((mu[(i,)] for i in range(1, mu.rank + 1)), Fraction(0))


def normalize_projective(mu: CurrentCoords) -> CurrentCoords:
    mass = total_mass(mu)
    if mass == 0:
        raise CurrentError("the zero current has no projective class")
    return scale(mu, 1 / mass)


def projective_distance(p: CurrentCoords, q: CurrentCoords) -> Fraction:
    """Half the L1 distance of the normalised top-level weights.

    Cylinders come in flip pairs ``v, v^-1`` with equal weight, so this is
    the L1 distance over flip classes.
    """
    _same_shape(p, q)
    p, q = normalize_projective(p), normalize_projective(q)
    top = set(p.level(p.depth)) | set(q.level(q.depth))
    return sum((abs(p[v] - q[v]) for v in top), Fraction(0)) / 2


def flip_symmetric(mu: CurrentCoords) -> bool:
    return all(mu[invert_word(v)] == c for v, c in mu.weights.items())


def consistent(mu: CurrentCoords) -> bool:
    """Each weight below full depth equals the sum over its one-letter extensions."""
    letters = letters_of_rank(mu.rank)
    for k in range(1, mu.depth):
        for v in _reduced_words_of_length(mu.rank, k):
            ext = sum((mu[v + (x,)] for x in letters if x != -v[-1]), Fraction(0))
            if ext != mu[v]:
                return False
    return True


def _reduced_words_of_length(rank: int, k: int) -> list[Word]:
    layer: list[Word] = [()]
    letters = letters_of_rank(rank)
    for _ in range(k):
        layer = [w + (x,) for w in layer for x in letters if not w or w[-1] != -x]
    return layer


def intersection_length(T: MarkedMetricGraph, g: Sequence[int]) -> Fraction:
    """The pairing of ``T`` with the counting current of ``g``."""
    _cyclic_core(g)
    return translation_length(T, g)


@dataclass
class IterationReport:
    coords: list[CurrentCoords]
    distances: list[Fraction]
    converged: bool
    converged_at: int | None
    tolerance: float

    def records(self) -> list[dict]:
        return [{"n": n + 1, "distance": str(d)} for n, d in enumerate(self.distances)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "converged": self.converged,
                "converged_at": self.converged_at,
                "tolerance": self.tolerance,
                "steps": self.records(),
            },
            indent=2,
        ) + "\n"


def iterate_iwip(
    phi: Automorphism,
    g: Sequence[int],
    n_max: int,
    depth: int,
    *,
    tolerance: float = 1e-6,
    max_word_length: int = 2_000_000,
    stop_on_convergence: bool = True,
) -> IterationReport:
    """Projectivised coordinates of ``phi^n(g)`` for ``n = 0, 1, ...``.

    ``distances[n-1]`` is the projective distance between steps ``n-1`` and
    ``n``; the run is marked converged once it drops below ``tolerance``.
    The tolerance only drives this verdict.
    """
    w = _cyclic_core(g)
    rank = phi.rank
    coords = [normalize_projective(counting_coords(w, depth, rank))]
    distances: list[Fraction] = []
    converged_at = None
    for n in range(1, n_max + 1):
        w = _cyclic_core(apply(phi, w))
        if len(w) > max_word_length:
            raise WordTooLong(f"phi^{n}(g) has cyclic length {len(w)} > {max_word_length}")
        coords.append(normalize_projective(counting_coords(w, depth, rank)))
        d = projective_distance(coords[-2], coords[-1])
        distances.append(d)
        if converged_at is None and d < tolerance:
            converged_at = n
            if stop_on_convergence:
                break
    return IterationReport(coords, distances, converged_at is not None, converged_at, tolerance)


def de_bruijn_word(rank: int) -> Word:
    """A reduced word containing every reduced two-letter word as a subword.

    Built as an Euler trail in the graph whose vertices are letters and whose
    edges are the reduced two-letter words.
    """
    letters = letters_of_rank(rank)
    succ = {x: [y for y in letters if y != -x] for x in letters}
    remaining = {x: list(reversed(ys)) for x, ys in succ.items()}
    stack = [letters[0]]
    trail: list[int] = []
    while stack:
        x = stack[-1]
        if remaining[x]:
            stack.append(remaining[x].pop())
        else:
            trail.append(stack.pop())
    return tuple(reversed(trail))


@dataclass
class FullSupportReport:
    witness: Word
    primitives_scanned: int
    violations: list[Word]

    @property
    def ok(self) -> bool:
        return not self.violations


def full_support_witness(rank: int = 2, max_len: int = 8) -> FullSupportReport:
    """Check that the witness word never occurs in a primitive cyclic word."""
    v = de_bruijn_word(rank)
    scanned = 0
    bad = []
    for p in enumerate_cyclic_words(rank, max_len):
        if not is_primitive(p, rank):
            continue
        scanned += 1
        if cylinder_weight(p, v) != 0:
            bad.append(p)
    return FullSupportReport(v, scanned, bad)
