"""Marked metric graphs: points of the outer space cv_N.

A point is stored as a finite graph with exact rational edge lengths, a
spanning tree, and one basis word per fundamental circuit.  Vertex
``vertices[0]`` is the basepoint.  The fundamental circuits are ordered like
the non-tree edges in ``edges``; circuit ``i`` runs along the tree from the
basepoint to the origin of the ``i``-th non-tree edge, crosses it, and comes
back along the tree.  The marking sends ``basis[i]`` to circuit ``i``.

Oriented edges and edge paths reuse the word encoding: ``+(k+1)`` is edge
``k`` traversed forwards and ``-(k+1)`` backwards, so free reduction of edge
paths is plain word reduction.

Equality in cv_N is decided through combinatorial isomorphisms.  This relies
on every vertex having degree at least 3: then an equivariant isometry of
the universal covers is simplicial and descends to a length-preserving
graph isomorphism.
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Any, Hashable, Iterator, Sequence

from .automorphisms import (
    Automorphism,
    apply,
    compose,
    is_inner,
    whitehead_generators,
)
from .folding import fold_words
from .words import (
    Word,
    canonical_conjugacy,
    concat,
    cyclic_reduce,
    format_word,
    invert_word,
    parse_word,
    reduce,
)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    origin: Hashable
    terminus: Hashable
    length: Fraction


@dataclass(frozen=True)
class MarkedMetricGraph:
    rank: int
    vertices: tuple
    edges: tuple[Edge, ...]
    tree: frozenset
    basis: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "tree", frozenset(self.tree))
        object.__setattr__(self, "basis", tuple(reduce(w) for w in self.basis))

    # -- structure -------------------------------------------------------

    @cached_property
    def _edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @cached_property
    def lengths(self) -> tuple[Fraction, ...]:
        return tuple(e.length for e in self.edges)

    @property
    def base(self):
        return self.vertices[0]

    def origin(self, oe: int):
        e = self.edges[abs(oe) - 1]
        return e.origin if oe > 0 else e.terminus

    def terminus(self, oe: int):
        e = self.edges[abs(oe) - 1]
        return e.terminus if oe > 0 else e.origin

    def oriented_edges(self) -> list[int]:
        return [s * (k + 1) for k in range(len(self.edges)) for s in (1, -1)]

    @cached_property
    def outgoing(self) -> dict[Hashable, list[int]]:
        out: dict[Hashable, list[int]] = {v: [] for v in self.vertices}
        for oe in self.oriented_edges():
            out[self.origin(oe)].append(oe)
        return out

    def degree(self, v) -> int:
        return len(self.outgoing[v])

    @cached_property
    def tree_paths(self) -> dict[Hashable, Word]:
        """Tree path from the basepoint to each vertex."""
        paths = {self.base: ()}
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for oe in self.outgoing[v]:
                if self.edges[abs(oe) - 1].id not in self.tree:
                    continue
                w = self.terminus(oe)
                if w not in paths:
                    paths[w] = paths[v] + (oe,)
                    queue.append(w)
        return paths

    @cached_property
    def non_tree_edges(self) -> tuple[int, ...]:
        return tuple(k for k, e in enumerate(self.edges) if e.id not in self.tree)

    @cached_property
    def _circuit_letter(self) -> dict[int, int]:
        return {k: i + 1 for i, k in enumerate(self.non_tree_edges)}

    @cached_property
    def circuits(self) -> tuple[Word, ...]:
        """Fundamental circuits as reduced edge loops at the basepoint."""
        out = []
        for k in self.non_tree_edges:
            oe = k + 1
            p = self.tree_paths[self.origin(oe)]
            q = self.tree_paths[self.terminus(oe)]
            out.append(concat(p, (oe,), invert_word(q)))
        return tuple(out)

    @cached_property
    def generator_paths(self) -> tuple[Word, ...]:
        """Edge loop at the basepoint representing each generator ``a_j``."""
        words = fold_words(self.basis, self.rank)
        if not words.is_basis:
            raise GraphError("marking is not an isomorphism")
        return tuple(_substitute(v, self.circuits) for v in words.generator_words)

    def path_of(self, g: Sequence[int]) -> Word:
        return _substitute(g, self.generator_paths)

    @cached_property
    def _scaled_lengths(self) -> tuple[int, tuple[int, ...]]:
        # common denominator keeps the hot summation in integers
        den = math.lcm(*(l.denominator for l in self.lengths)) if self.edges else 1
        return den, tuple(int(l * den) for l in self.lengths)

    def path_length(self, path: Sequence[int]) -> Fraction:
        den, scaled = self._scaled_lengths
        return Fraction(sum(scaled[abs(oe) - 1] for oe in path), den)

    def loop_to_word(self, loop: Sequence[int]) -> Word:
        """F_N element of an edge path, read through the non-tree edges."""
        letters = []
        for oe in loop:
            c = self._circuit_letter.get(abs(oe) - 1)
            if c is not None:
                letters.append(c if oe > 0 else -c)
        return _substitute(letters, self.basis)

    # -- serialisation ---------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "rank": self.rank,
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "from": e.origin, "to": e.terminus, "length": str(e.length)}
                for e in self.edges
            ],
            "tree": [e.id for e in self.edges if e.id in self.tree],
            "basis": [format_word(w) for w in self.basis],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MarkedMetricGraph":
        try:
            edges = tuple(
                Edge(str(e["id"]), e["from"], e["to"], Fraction(str(e["length"])))
                for e in data["edges"]
            )
            return cls(
                rank=int(data["rank"]),
                vertices=tuple(data["vertices"]),
                edges=edges,
                tree=frozenset(str(t) for t in data["tree"]),
                basis=tuple(parse_word(w) for w in data["basis"]),
            )
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph description: {exc!r}") from exc

    @classmethod
    def from_json(cls, text: str) -> "MarkedMetricGraph":
        return cls.from_dict(json.loads(text))


def _substitute(v: Sequence[int], words: Sequence[Word]) -> Word:
    out: list[int] = []
    for x in v:
        img = words[x - 1] if x > 0 else invert_word(words[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def load_graph(path) -> MarkedMetricGraph:
    with open(path) as fh:
        return MarkedMetricGraph.from_json(fh.read())


def save_graph(graph: MarkedMetricGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(graph.to_json())


# -- validation ----------------------------------------------------------


def validate(graph: MarkedMetricGraph) -> list[str]:
    """Diagnostics for every violated invariant; empty when ``graph`` is valid."""
    diags: list[str] = []
    vertices = graph.vertices
    vset = set(vertices)
    if len(vset) != len(vertices):
        diags.append("duplicate vertex names")
    if not vertices:
        return ["graph has no vertices"]
    ids = [e.id for e in graph.edges]
    if len(set(ids)) != len(ids):
        diags.append("duplicate edge ids")
    bad_ends = False
    for e in graph.edges:
        if e.origin not in vset or e.terminus not in vset:
            diags.append(f"edge {e.id}: endpoint not a vertex")
            bad_ends = True
        if not e.length > 0:
            diags.append(f"edge {e.id}: nonpositive length {e.length}")
    if bad_ends:
        return diags

    # connectivity
    adj: dict[Hashable, set] = {v: set() for v in vertices}
    for e in graph.edges:
        adj[e.origin].add(e.terminus)
        adj[e.terminus].add(e.origin)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(vertices):
        diags.append("graph is not connected")

    betti = len(graph.edges) - len(vertices) + 1
    if betti != graph.rank:
        diags.append(f"first Betti number {betti} differs from rank {graph.rank}")

    for v in vertices:
        d = graph.degree(v)
        if d < 3:
            diags.append(f"degree-{d} vertex {v!r}")

    unknown = graph.tree - set(ids)
    if unknown:
        diags.append(f"tree names unknown edges {sorted(unknown)}")
    tree_ok = _is_spanning_tree(graph)
    if not tree_ok:
        diags.append("tree is not a spanning tree")

    if len(graph.basis) != graph.rank:
        diags.append(f"expected {graph.rank} basis words, got {len(graph.basis)}")
    elif not fold_words(graph.basis, graph.rank).is_basis:
        diags.append("marking not an isomorphism: basis words are not a free basis")
    return diags


def _is_spanning_tree(graph: MarkedMetricGraph) -> bool:
    tree_edges = [e for e in graph.edges if e.id in graph.tree]
    if len(tree_edges) != len(graph.vertices) - 1:
        return False
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in tree_edges:
        a, b = find(e.origin), find(e.terminus)
        if a == b:
            return False
        parent[a] = b
    return True


def check(graph: MarkedMetricGraph) -> MarkedMetricGraph:
    diags = validate(graph)
    if diags:
        raise GraphError("; ".join(diags))
    return graph


# -- lengths ---------------------------------------------------------------


def translation_length(graph: MarkedMetricGraph, g: Sequence[int]) -> Fraction:
    path = graph.path_of(g)
    if not path:
        return Fraction(0)
    core, _ = cyclic_reduce(path)
    return graph.path_length(core)


def is_immersed_circuit(graph: MarkedMetricGraph, circuit: Sequence[int]) -> bool:
    n = len(circuit)
    if n == 0:
        return False
    for i in range(n):
        a, b = circuit[i], circuit[(i + 1) % n]
        if graph.terminus(a) != graph.origin(b):
            return False
        if b == -a:
            return False
    return True


def circuit_to_word(graph: MarkedMetricGraph, circuit: Sequence[int]) -> Word:
    """Canonical conjugacy class of the F_N element carried by an immersed circuit."""
    if not is_immersed_circuit(graph, circuit):
        raise GraphError("circuit is not an immersed closed edge path")
    return canonical_conjugacy(graph.loop_to_word(circuit))


def volume(graph: MarkedMetricGraph) -> Fraction:
    return sum(graph.lengths, Fraction(0))


def scale(graph: MarkedMetricGraph, c) -> MarkedMetricGraph:
    c = Fraction(c)
    if c <= 0:
        raise GraphError("scale factor must be positive")
    edges = tuple(replace(e, length=e.length * c) for e in graph.edges)
    return replace(graph, edges=edges)


def normalize_covolume(graph: MarkedMetricGraph) -> MarkedMetricGraph:
    return scale(graph, 1 / volume(graph))


def act(graph: MarkedMetricGraph, phi: Automorphism) -> MarkedMetricGraph:
    """Right action: lengths satisfy ``||g||_{act(T, phi)} = ||phi(g)||_T``."""
    inv = phi.inverse()
    return replace(graph, basis=tuple(apply(inv, u) for u in graph.basis))


# -- equality in cv_N ------------------------------------------------------


def isometries(G: MarkedMetricGraph, H: MarkedMetricGraph) -> Iterator[tuple[dict, dict]]:
    """Length-preserving graph isomorphisms ``G -> H``.

    Yields ``(vertex_map, edge_map)`` where ``edge_map`` sends each edge index
    of ``G`` to an oriented edge of ``H``.
    """
    if len(G.vertices) != len(H.vertices) or len(G.edges) != len(H.edges):
        return
    if sorted(G.lengths) != sorted(H.lengths):
        return
    if sorted(G.degree(v) for v in G.vertices) != sorted(H.degree(v) for v in H.vertices):
        return
    order = _edge_order(G)
    h_oriented = H.oriented_edges()
    vmap: dict = {}
    vused: set = set()
    emap: dict[int, int] = {}
    eused: set[int] = set()

    def bind(v, w) -> bool | None:
        """Bind v -> w; return True if newly bound, False if already, None if conflicting."""
        if v in vmap:
            return False if vmap[v] == w else None
        if w in vused or G.degree(v) != H.degree(w):
            return None
        vmap[v] = w
        vused.add(w)
        return True

    def search(i: int):
        if i == len(order):
            yield dict(vmap), dict(emap)
            return
        k = order[i]
        e = G.edges[k]
        for f in h_oriented:
            if abs(f) in eused or H.lengths[abs(f) - 1] != e.length:
                continue
            if (e.origin == e.terminus) != (H.origin(f) == H.terminus(f)):
                continue
            b1 = bind(e.origin, H.origin(f))
            if b1 is None:
                continue
            b2 = bind(e.terminus, H.terminus(f))
            if b2 is None:
                if b1:
                    del vmap[e.origin]
                    vused.discard(H.origin(f))
                continue
            emap[k] = f
            eused.add(abs(f))
            yield from search(i + 1)
            del emap[k]
            eused.discard(abs(f))
            if b2:
                del vmap[e.terminus]
                vused.discard(H.terminus(f))
            if b1:
                del vmap[e.origin]
                vused.discard(H.origin(f))

    yield from search(0)


def _edge_order(G: MarkedMetricGraph) -> list[int]:
    # breadth-first so each new edge touches an already bound vertex
    order: list[int] = []
    placed: set[int] = set()
    reached = {G.base}
    while len(order) < len(G.edges):
        progress = False
        for k, e in enumerate(G.edges):
            if k in placed:
                continue
            if e.origin in reached or e.terminus in reached:
                order.append(k)
                placed.add(k)
                reached.update((e.origin, e.terminus))
                progress = True
        if not progress:
            order.extend(k for k in range(len(G.edges)) if k not in placed)
            break
    return order


def induced_automorphism(G: MarkedMetricGraph, H: MarkedMetricGraph, vmap: dict, emap: dict) -> Automorphism:
    """``m_H^-1 . sigma_* . m_G`` for the isometry ``sigma = (vmap, emap)``."""
    to_base = H.tree_paths[vmap[G.base]]
    back = invert_word(to_base)
    images = []
    for path in G.generator_paths:
        moved = tuple(emap[x - 1] if x > 0 else -emap[-x - 1] for x in path)
        images.append(H.loop_to_word(concat(to_base, moved, back)))
    return Automorphism(tuple(images))


def equal_in_cv(G: MarkedMetricGraph, H: MarkedMetricGraph) -> bool:
    if G.rank != H.rank:
        raise GraphError(f"rank mismatch: {G.rank} vs {H.rank}")
    for vmap, emap in isometries(G, H):
        if is_inner(induced_automorphism(G, H, vmap, emap)) is not None:
            return True
    return False


# -- constructors and the random catalog ---------------------------------


def graph_from_edges(
    rank: int,
    n_vertices: int,
    ends: Sequence[tuple[int, int]],
    lengths: Sequence = None,
    basis: Sequence[Sequence[int]] | None = None,
) -> MarkedMetricGraph:
    """Build a graph on vertices ``0..n-1`` with a breadth-first spanning tree."""
    if lengths is None:
        lengths = [1] * len(ends)
    edges = tuple(
        Edge(f"e{k}", o, t, Fraction(l)) for k, ((o, t), l) in enumerate(zip(ends, lengths))
    )
    tree: set[str] = set()
    reached = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in edges:
            for a, b in ((e.origin, e.terminus), (e.terminus, e.origin)):
                if a == v and b not in reached:
                    reached.add(b)
                    tree.add(e.id)
                    queue.append(b)
    if basis is None:
        basis = [(i,) for i in range(1, rank + 1)]
    return MarkedMetricGraph(rank, tuple(range(n_vertices)), edges, frozenset(tree), tuple(tuple(b) for b in basis))


def rose(rank: int, lengths: Sequence = None, basis: Sequence[Sequence[int]] | None = None) -> MarkedMetricGraph:
    return graph_from_edges(rank, 1, [(0, 0)] * rank, lengths, basis)


def theta(lengths: Sequence = None, basis=None) -> MarkedMetricGraph:
    return graph_from_edges(2, 2, [(0, 1), (0, 1), (0, 1)], lengths, basis)


def barbell(lengths: Sequence = None, basis=None) -> MarkedMetricGraph:
    """Loops at vertices 0 and 1 joined by a bridge; edges are loop0, bridge, loop1."""
    return graph_from_edges(2, 2, [(0, 0), (0, 1), (1, 1)], lengths, basis)


# (vertex count, edge ends) of the combinatorial types used for sampling
CATALOG: dict[int, dict[str, tuple[int, list[tuple[int, int]]]]] = {
    2: {
        "rose": (1, [(0, 0), (0, 0)]),
        "theta": (2, [(0, 1), (0, 1), (0, 1)]),
        "barbell": (2, [(0, 0), (0, 1), (1, 1)]),
    },
    3: {
        "rose": (1, [(0, 0), (0, 0), (0, 0)]),
        "k4": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        "two_digons": (4, [(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]),
        "loop_chain": (4, [(0, 0), (0, 1), (1, 2), (1, 2), (2, 3), (3, 3)]),
        "tripod_loops": (4, [(0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)]),
        "loop_theta": (4, [(0, 0), (0, 1), (1, 2), (1, 3), (2, 3), (2, 3)]),
    },
}


def catalog(rank: int) -> dict[str, tuple[int, list[tuple[int, int]]]]:
    if rank in CATALOG:
        return CATALOG[rank]
    return {"rose": (1, [(0, 0)] * rank)}


def catalog_graphs(rank: int) -> dict[str, MarkedMetricGraph]:
    """Every catalog type with unit lengths and the standard marking."""
    return {name: graph_from_edges(rank, nv, ends) for name, (nv, ends) in catalog(rank).items()}


def random_automorphism(rank: int, rng: random.Random, steps: int) -> Automorphism:
    gens = whitehead_generators(rank)
    phi = Automorphism.identity(rank)
    for _ in range(steps):
        phi = compose(rng.choice(gens), phi)
    return phi


def random_marked_graph(
    rank: int,
    seed: int | random.Random,
    *,
    max_numerator: int = 9,
    max_denominator: int = 4,
    marking_steps: int = 3,
    kind: str | None = None,
) -> MarkedMetricGraph:
    """Sample a graph type from the catalog, rational lengths and a marking.

    The marking is the standard one twisted by a product of up to
    ``marking_steps`` random Whitehead moves.
    """
    if rank < 2:
        raise GraphError("rank must be >= 2")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    types = catalog(rank)
    name = kind if kind is not None else rng.choice(sorted(types))
    nv, ends = types[name]
    lengths = [
        Fraction(rng.randint(1, max_numerator), rng.randint(1, max_denominator)) for _ in ends
    ]
    phi = random_automorphism(rank, rng, rng.randint(0, marking_steps))
    return graph_from_edges(rank, nv, ends, lengths, phi.images)
