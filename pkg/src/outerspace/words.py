"""Free-group words over a fixed basis.

A letter is a nonzero int: ``+i`` is the generator ``a_i`` and ``-i`` its
inverse.  Words are plain tuples of letters, always freely reduced when they
come out of this module.  The text syntax uses ``a..z`` for generators
``1..26`` and upper case for inverses, so ``abAB`` is the commutator
``[a, b]``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

IDENTITY: Word = ()

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


class WordError(ValueError):
    pass


def letter_key(x: int) -> int:
    """Sort key realising the order a < A < b < B < ..."""
    return 2 * abs(x) + (x < 0)


def word_key(w: Sequence[int]) -> tuple[int, ...]:
    return tuple(2 * abs(x) + (x < 0) for x in w)


def parse_word(text: str) -> Word:
    """Parse ``text`` into a reduced word.

    Whitespace is ignored; ``""`` and ``"1"`` denote the identity.
    """
    s = "".join(text.split())
    if s == "1":
        return IDENTITY
    letters = []
    for pos, ch in enumerate(s):
        idx = _ALPHABET.find(ch.lower())
        if idx < 0 or not ch.isascii():
            raise WordError(f"invalid character {ch!r} at position {pos} in {text!r}")
        letters.append(idx + 1 if ch.islower() else -(idx + 1))
    return reduce(letters)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return "".join(
        _ALPHABET[x - 1] if x > 0 else _ALPHABET[-x - 1].upper() for x in w
    )


def reduce(raw: Iterable[int]) -> Word:
    out: list[int] = []
    for x in raw:
        if x == 0:
            raise WordError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        w, n = invert_word(w), -n
    return concat(*([w] * n))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    return concat(u, v, invert_word(u), invert_word(v))


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``conjugator * core * conjugator^-1``.

    The core is cyclically reduced, hence of minimal length in the
    conjugacy class.
    """
    w = reduce(w)
    if not w:
        raise WordError("trivial element has no cyclic core")
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1], w[:i]


def cyclic_length(w: Sequence[int]) -> int:
    w = reduce(w)
    if not w:
        return 0
    return len(cyclic_reduce(w)[0])


def least_rotation(w: Sequence[int]) -> Word:
    """Lexicographically least rotation of ``w`` under the letter order."""
    w = tuple(w)
    n = len(w)
    if n <= 1:
        return w
    best_key = None
    best = w
    for i in range(n):
        r = w[i:] + w[:i]
        k = word_key(r)
        if best_key is None or k < best_key:
            best_key, best = k, r
    return best


def canonical_conjugacy(w: Sequence[int]) -> Word:
    """Canonical representative of the conjugacy class of ``w``.

    Two words give the same output iff they are conjugate.
    """
    core, _ = cyclic_reduce(w)
    return least_rotation(core)


def canonical_unoriented(w: Sequence[int]) -> Word:
    """Canonical representative of the class of ``w`` up to inversion."""
    c1 = canonical_conjugacy(w)
    c2 = least_rotation(invert_word(c1))
    return min(c1, c2, key=word_key)


def are_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    u, v = reduce(u), reduce(v)
    if not u or not v:
        return not u and not v
    return canonical_conjugacy(u) == canonical_conjugacy(v)


def exponent_sum(w: Sequence[int], i: int) -> int:
    return sum(1 if x == i else -1 for x in w if abs(x) == i)


def letters_of_rank(n: int) -> list[int]:
    """All 2n letters in the canonical letter order."""
    out = []
    for i in range(1, n + 1):
        out += [i, -i]
    return out


def count_reduced_words(n: int, max_len: int) -> int:
    return 1 + sum(2 * n * (2 * n - 1) ** (k - 1) for k in range(1, max_len + 1))


def enumerate_reduced_words(n: int, max_len: int) -> Iterator[Word]:
    """Every reduced word of length <= ``max_len`` once, shortlex order."""
    if max_len < 0:
        return
    yield IDENTITY
    letters = letters_of_rank(n)
    layer: list[Word] = [IDENTITY]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        layer = nxt


def enumerate_cyclic_words(n: int, max_len: int) -> Iterator[Word]:
    """Each nontrivial conjugacy class of cyclic length <= ``max_len`` once.

    Classes are yielded as their canonical representatives.
    """
    letters = letters_of_rank(n)
    for length in range(1, max_len + 1):
        for w in _cyclically_reduced_of_length(letters, length):
            if least_rotation(w) == w:
                yield w


def _cyclically_reduced_of_length(letters: list[int], length: int) -> Iterator[Word]:
    def extend(prefix: list[int]) -> Iterator[Word]:
        if len(prefix) == length:
            if length == 1 or prefix[0] != -prefix[-1]:
                yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            # a canonical rotation never starts above its first letter
            if prefix and letter_key(x) < letter_key(prefix[0]):
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def enumerate_unoriented_classes(n: int, max_len: int) -> Iterator[Word]:
    """Each nontrivial class up to conjugacy and inversion once."""
    for w in enumerate_cyclic_words(n, max_len):
        if canonical_unoriented(w) == w:
            yield w


def all_words_of_length(n: int, length: int) -> Iterator[Word]:
    letters = letters_of_rank(n)
    for w in product(letters, repeat=length):
        if is_reduced(w):
            yield w
