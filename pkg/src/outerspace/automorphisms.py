"""Automorphisms of F_N, Whitehead moves and primitivity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

from .folding import fold_words
from .words import (
    Word,
    WordError,
    canonical_conjugacy,
    concat,
    cyclic_reduce,
    format_word,
    invert_word,
    parse_word,
    reduce,
)


class AutomorphismError(ValueError):
    pass


class OrbitTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Automorphism:
    """An automorphism given by the images of the generators.

    The images are checked to form a free basis at construction time, and the
    inverse is computed then.  Passing ``inverse_images`` skips the check; only
    do that when the inverse is already known to be right.
    """

    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] = field(default=None, compare=False, repr=False)
    kind: str = field(default="", compare=False)

    def __post_init__(self):
        images = tuple(reduce(w) for w in self.images)
        object.__setattr__(self, "images", images)
        if self.inverse_images is None:
            result = fold_words(images, len(images))
            if not result.is_basis:
                raise AutomorphismError(
                    f"images {format_automorphism(self)!r} are not a free basis: {result.reason}"
                )
            object.__setattr__(self, "inverse_images", result.generator_words)
        else:
            object.__setattr__(self, "inverse_images", tuple(reduce(w) for w in self.inverse_images))

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Automorphism":
        gens = tuple((i,) for i in range(1, n + 1))
        return cls(gens, gens, kind="identity")

    @classmethod
    def parse(cls, text: str) -> "Automorphism":
        return cls(tuple(parse_word(t) for t in text.split()))

    def __call__(self, w: Sequence[int]) -> Word:
        return apply(self, w)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.inverse_images, self.images, kind=self.kind)

    def __str__(self) -> str:
        return format_automorphism(self)


def format_automorphism(phi: Automorphism) -> str:
    return " ".join(format_word(w) for w in phi.images)


def apply(phi: Automorphism, w: Sequence[int]) -> Word:
    images = phi.images
    out: list[int] = []
    for x in w:
        img = images[x - 1] if x > 0 else invert_word(images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """The automorphism ``w -> phi(psi(w))``."""
    if phi.rank != psi.rank:
        raise AutomorphismError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    images = tuple(apply(phi, w) for w in psi.images)
    inv = tuple(apply(psi.inverse(), w) for w in phi.inverse_images)
    return Automorphism(images, inv)


def invert_automorphism(phi: Automorphism) -> Automorphism:
    return phi.inverse()


def rewrite_in_basis(g: Sequence[int], basis: Sequence[Sequence[int]]) -> Word:
    """Write ``g`` as a reduced word in the basis elements.

    Letter ``i`` of the result stands for ``basis[i-1]``.
    """
    gen_words = _generator_words(tuple(tuple(b) for b in basis))
    out: list[int] = []
    for x in g:
        img = gen_words[x - 1] if x > 0 else invert_word(gen_words[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


@lru_cache(maxsize=4096)
def _generator_words(basis: tuple[Word, ...]) -> tuple[Word, ...]:
    result = fold_words(basis)
    if not result.is_basis:
        raise AutomorphismError(f"not a free basis: {result.reason}")
    return result.generator_words


def substitute(v: Sequence[int], words: Sequence[Sequence[int]]) -> Word:
    """Replace letter ``i`` of ``v`` by ``words[i-1]`` and reduce."""
    return concat(*(words[x - 1] if x > 0 else invert_word(words[-x - 1]) for x in v))


def permutation_moves(n: int) -> list[Automorphism]:
    """Signed permutations of the generators, identity excluded."""
    moves = []
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            images = tuple((s * p,) for p, s in zip(perm, signs))
            if all(img == (i + 1,) for i, img in enumerate(images)):
                continue
            moves.append(Automorphism(images, _signed_perm_inverse(images), kind="permutation"))
    return moves


def _signed_perm_inverse(images: tuple[Word, ...]) -> tuple[Word, ...]:
    inv = [None] * len(images)
    for i, (y,) in enumerate(images):
        inv[abs(y) - 1] = ((i + 1) if y > 0 else -(i + 1),)
    return tuple(inv)


def multiplier_moves(n: int) -> list[Automorphism]:
    """Whitehead moves fixing a multiplier letter ``m``.

    Every other generator ``y`` goes to one of ``y``, ``y m``, ``m^-1 y`` or
    ``m^-1 y m``; the all-trivial choice is dropped, leaving
    ``2n (4^(n-1) - 1)`` moves.
    """
    moves = []
    for k in range(1, n + 1):
        for m in (k, -k):
            others = [i for i in range(1, n + 1) if i != k]
            for choice in product(range(4), repeat=n - 1):
                if not any(choice):
                    continue
                images: list[Word] = [()] * n
                inverse: list[Word] = [()] * n
                images[k - 1] = inverse[k - 1] = (k,)
                for y, c in zip(others, choice):
                    right = (m,) if c in (1, 3) else ()
                    left = (-m,) if c in (2, 3) else ()
                    images[y - 1] = reduce(left + (y,) + right)
                    inverse[y - 1] = reduce(invert_word(left) + (y,) + invert_word(right))
                moves.append(Automorphism(tuple(images), tuple(inverse), kind="multiplier"))
    return moves


@lru_cache(maxsize=None)
def whitehead_generators(n: int) -> tuple[Automorphism, ...]:
    if n < 2:
        raise AutomorphismError("Whitehead generators need rank >= 2")
    return tuple(permutation_moves(n) + multiplier_moves(n))


@lru_cache(maxsize=None)
def _reducing_moves(n: int) -> tuple[Automorphism, ...]:
    # signed permutations preserve length, so only multiplier moves can reduce
    return tuple(m for m in whitehead_generators(n) if m.kind == "multiplier")


def whitehead_minimize(g: Sequence[int], rank: int | None = None) -> tuple[Word, list[Automorphism]]:
    """Shorten the cyclic word of ``g`` by Whitehead moves until none helps.

    Moves are scanned in a fixed order and the first strictly shortening one
    is applied.  By peak reduction the final length is the minimum over the
    whole ``Aut(F_N)``-orbit of the conjugacy class.
    """
    g = reduce(g)
    if not g:
        raise WordError("trivial element has no cyclic core")
    n = rank if rank is not None else max(abs(x) for x in g)
    current = canonical_conjugacy(g)
    applied: list[Automorphism] = []
    if n < 2:
        return current, applied
    moves = _reducing_moves(n)
    improved = True
    while improved and len(current) > 1:
        improved = False
        for m in moves:
            core, _ = cyclic_reduce(apply(m, current))
            if len(core) < len(current):
                current = canonical_conjugacy(core)
                applied.append(m)
                improved = True
                break
    return current, applied


def is_primitive(g: Sequence[int], rank: int | None = None) -> bool:
    minimal, _ = whitehead_minimize(g, rank)
    return len(minimal) == 1


def is_inner(phi: Automorphism) -> Word | None:
    """Return ``w`` with ``phi(x) = w x w^-1`` for every generator, if any."""
    n = phi.rank
    first = phi.images[0]
    core, conj = cyclic_reduce(first)
    if core != (1,):
        return None
    if n == 1:
        return ()
    # w = conj * a_1^k; read k off the image of a_2
    y = concat(invert_word(conj), phi.images[1], conj)
    k = 0
    while k < len(y) and y[k] == 1:
        k += 1
    if k == 0:
        while k < len(y) and y[k] == -1:
            k += 1
        k = -k
    w = concat(conj, (1,) * k if k >= 0 else (-1,) * (-k))
    wi = invert_word(w)
    for i, img in enumerate(phi.images):
        if concat(w, (i + 1,), wi) != img:
            return None
    return w


def orbit_ball(
    gens: Iterable[Automorphism],
    g: Sequence[int],
    radius: int,
    cap: int = 200_000,
) -> set[Word]:
    """Conjugacy classes of ``phi(g)`` for products of at most ``radius`` generators."""
    layers = orbit_layers(gens, g, radius, cap)
    return set().union(*layers)


def orbit_layers(
    gens: Iterable[Automorphism],
    g: Sequence[int],
    radius: int,
    cap: int = 200_000,
) -> list[set[Word]]:
    """Breadth-first layers of the orbit ball; layer ``r`` holds the classes first reached at distance ``r``."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    moves = _with_inverses(gens)
    start = canonical_conjugacy(g)
    seen = {start}
    layers = [{start}]
    frontier = deque([start])
    for _ in range(radius):
        nxt: set[Word] = set()
        for w in frontier:
            for m in moves:
                c = canonical_conjugacy(apply(m, w))
                if c not in seen:
                    seen.add(c)
                    nxt.add(c)
                    if len(seen) > cap:
                        raise OrbitTooLarge(f"orbit ball exceeded {cap} classes")
        if not nxt:
            break
        layers.append(nxt)
        frontier = deque(sorted(nxt))
    return layers


def _with_inverses(gens: Iterable[Automorphism]) -> list[Automorphism]:
    out: list[Automorphism] = []
    seen: set[tuple[Word, ...]] = set()
    for m in gens:
        for x in (m, m.inverse()):
            if x.images not in seen:
                seen.add(x.images)
                out.append(x)
    return out
