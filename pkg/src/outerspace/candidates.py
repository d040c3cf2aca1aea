"""Almost simple curves and extremal Lipschitz distortion.

The candidate set of a marked graph consists of its embedded circuits,
figure-eights (two edge-disjoint embedded circuits through a common vertex)
and barbells (two edge-disjoint embedded circuits at distinct vertices joined
by an embedded path sharing no edge with either).  Only edge-disjointness is
required, which gives a superset of the stricter classical candidate list;
every extra element is still a genuine group element, so the maximum length
ratio over the set is unchanged.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .automorphisms import is_primitive
from .graphs import (
    GraphError,
    MarkedMetricGraph,
    equal_in_cv,
    translation_length,
)
from .words import Word, canonical_unoriented, enumerate_unoriented_classes, format_word, invert_word, word_key

KINDS = ("simple", "figure_eight", "barbell")


class CandidateError(RuntimeError):
    pass


class RigidityViolation(AssertionError):
    """Equal lengths on every candidate but the two points differ."""


@dataclass(frozen=True)
class Candidate:
    kind: str
    circuit: tuple[int, ...]
    word: Word
    length_in_T: Fraction

    def sort_key(self):
        return (KINDS.index(self.kind), len(self.word), word_key(self.word))


def _unoriented_cycle_key(cycle: Sequence[int]) -> tuple[int, ...]:
    n = len(cycle)
    best = None
    for seq in (tuple(cycle), tuple(invert_word(cycle))):
        for i in range(n):
            r = seq[i:] + seq[:i]
            if best is None or r < best:
                best = r
    return best


def simple_cycles(graph: MarkedMetricGraph) -> list[tuple[int, ...]]:
    """Embedded circuits, one per unoriented rotation class, as edge cycles."""
    position = {v: i for i, v in enumerate(graph.vertices)}
    found: dict[tuple[int, ...], tuple[int, ...]] = {}

    def dfs(start, v, path: list[int], used_edges: set[int], used_vertices: set):
        for oe in graph.outgoing[v]:
            if abs(oe) in used_edges:
                continue
            w = graph.terminus(oe)
            if w == start:
                cycle = tuple(path + [oe])
                found.setdefault(_unoriented_cycle_key(cycle), cycle)
                continue
            if w in used_vertices or position[w] < position[start]:
                continue
            path.append(oe)
            used_edges.add(abs(oe))
            used_vertices.add(w)
            dfs(start, w, path, used_edges, used_vertices)
            used_vertices.discard(w)
            used_edges.discard(abs(oe))
            path.pop()

    for s in graph.vertices:
        dfs(s, s, [], set(), {s})
    return [found[k] for k in sorted(found)]


def _rotate_to(graph: MarkedMetricGraph, cycle: Sequence[int], v) -> tuple[int, ...] | None:
    for i, oe in enumerate(cycle):
        if graph.origin(oe) == v:
            return tuple(cycle[i:]) + tuple(cycle[:i])
    return None


def _cycle_vertices(graph: MarkedMetricGraph, cycle: Sequence[int]) -> list:
    return [graph.origin(oe) for oe in cycle]


def _edge_set(cycle: Iterable[int]) -> frozenset[int]:
    return frozenset(abs(oe) for oe in cycle)


def _simple_paths(graph: MarkedMetricGraph, src, dst, forbidden: frozenset[int]) -> Iterator[tuple[int, ...]]:
    def walk(v, path: list[int], visited: set):
        if v == dst:
            yield tuple(path)
            return
        for oe in graph.outgoing[v]:
            if abs(oe) in forbidden:
                continue
            w = graph.terminus(oe)
            if w in visited:
                continue
            visited.add(w)
            path.append(oe)
            yield from walk(w, path, visited)
            path.pop()
            visited.discard(w)

    yield from walk(src, [], {src})


def _make(graph: MarkedMetricGraph, kind: str, circuit: tuple[int, ...]) -> Candidate:
    word = canonical_unoriented(graph.loop_to_word(circuit))
    return Candidate(kind, circuit, word, graph.path_length(circuit))


def _dedupe(cands: Iterable[Candidate]) -> list[Candidate]:
    out: dict[Word, Candidate] = {}
    for c in cands:
        out.setdefault(c.word, c)
    return sorted(out.values(), key=Candidate.sort_key)


def enumerate_simple_circuits(graph: MarkedMetricGraph) -> list[Candidate]:
    return _dedupe(_make(graph, "simple", c) for c in simple_cycles(graph))


def _figure_eights(graph: MarkedMetricGraph) -> Iterator[Candidate]:
    cycles = simple_cycles(graph)
    for i, g1 in enumerate(cycles):
        for g2 in cycles[i + 1 :]:
            if _edge_set(g1) & _edge_set(g2):
                continue
            common = set(_cycle_vertices(graph, g1)) & set(_cycle_vertices(graph, g2))
            for v in sorted(common, key=graph.vertices.index):
                r1 = _rotate_to(graph, g1, v)
                r2 = _rotate_to(graph, g2, v)
                for second in (r2, invert_word(r2)):
                    yield _make(graph, "figure_eight", r1 + second)


def enumerate_figure_eights(graph: MarkedMetricGraph) -> list[Candidate]:
    return _dedupe(_figure_eights(graph))


def _barbells(graph: MarkedMetricGraph) -> Iterator[Candidate]:
    cycles = simple_cycles(graph)
    for i, g1 in enumerate(cycles):
        for g2 in cycles[i + 1 :]:
            e1, e2 = _edge_set(g1), _edge_set(g2)
            if e1 & e2:
                continue
            forbidden = e1 | e2
            for v1 in dict.fromkeys(_cycle_vertices(graph, g1)):
                for v2 in dict.fromkeys(_cycle_vertices(graph, g2)):
                    if v1 == v2:
                        continue
                    r1 = _rotate_to(graph, g1, v1)
                    r2 = _rotate_to(graph, g2, v2)
                    for beta in _simple_paths(graph, v1, v2, forbidden):
                        back = invert_word(beta)
                        for second in (r2, invert_word(r2)):
                            yield _make(graph, "barbell", r1 + beta + second + back)


def enumerate_barbells(graph: MarkedMetricGraph) -> list[Candidate]:
    return _dedupe(_barbells(graph))


@lru_cache(maxsize=1024)
def candidate_set(graph: MarkedMetricGraph, verify: bool = True) -> tuple[Candidate, ...]:
    """The finite candidate set, deduplicated by unoriented conjugacy class.

    With ``verify`` every member is checked to be primitive.
    """
    cands = _dedupe(
        list(enumerate_simple_circuits(graph))
        + list(_figure_eights(graph))
        + list(_barbells(graph))
    )
    if verify:
        for c in cands:
            if not is_primitive(c.word, graph.rank):
                raise CandidateError(f"{c.kind} candidate {format_word(c.word)} is not primitive")
    return tuple(cands)


def _check_ranks(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> None:
    if T.rank != T2.rank:
        raise GraphError(f"rank mismatch: {T.rank} vs {T2.rank}")


def candidate_ratios(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> list[tuple[Candidate, Fraction, Fraction]]:
    _check_ranks(T, T2)
    rows = []
    for c in candidate_set(T):
        other = translation_length(T2, c.word)
        rows.append((c, other, other / c.length_in_T))
    return rows


def distortion(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> Fraction:
    """Extremal Lipschitz distortion: the largest length ratio over the candidates of ``T``."""
    return max(r for _, _, r in candidate_ratios(T, T2))


def maximizing_candidates(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> list[Candidate]:
    rows = candidate_ratios(T, T2)
    best = max(r for _, _, r in rows)
    return [c for c, _, r in rows if r == best]


@lru_cache(maxsize=16)
def _classes(rank: int, max_len: int) -> tuple[Word, ...]:
    return tuple(enumerate_unoriented_classes(rank, max_len))


def distortion_bruteforce(T: MarkedMetricGraph, T2: MarkedMetricGraph, max_len: int) -> Fraction:
    """Largest length ratio over every conjugacy class of cyclic length <= ``max_len``."""
    _check_ranks(T, T2)
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    best = None
    for w in _classes(T.rank, max_len):
        r = translation_length(T2, w) / translation_length(T, w)
        if best is None or r > best:
            best = r
    return best


def theorem_c_witness(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> Candidate | None:
    """A candidate of ``T`` whose length differs in ``T2``, or ``None`` when all agree.

    Agreement on every candidate forces ``T == T2`` in cv_N; if the points
    turn out to differ anyway, ``RigidityViolation`` is raised.
    """
    for c, other, _ in candidate_ratios(T, T2):
        if other != c.length_in_T:
            return c
    if not equal_in_cv(T, T2):
        raise RigidityViolation("all candidate lengths agree but the points differ")
    return None


def candidates_csv(T: MarkedMetricGraph, T2: MarkedMetricGraph | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "word", "length_in_T", "length_in_Tprime", "ratio"])
    if T2 is None:
        T2 = T
    for c, other, ratio in candidate_ratios(T, T2):
        writer.writerow([c.kind, format_word(c.word), str(c.length_in_T), str(other), str(ratio)])
    return buf.getvalue()
