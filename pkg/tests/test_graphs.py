from fractions import Fraction

import pytest

from outerspace.automorphisms import Automorphism, apply, compose
from outerspace.graphs import (
    CATALOG,
    Edge,
    GraphError,
    MarkedMetricGraph,
    act,
    circuit_to_word,
    equal_in_cv,
    graph_from_edges,
    normalize_covolume,
    random_automorphism,
    random_marked_graph,
    rose,
    scale,
    theta,
    translation_length,
    validate,
    volume,
)
from outerspace.words import (
    canonical_conjugacy,
    concat,
    enumerate_cyclic_words,
    invert_word,
    parse_word,
    power,
)

from conftest import random_word

p = parse_word
T_A = rose(2)
T_B = rose(2, basis=[p("a"), p("ab")])


def test_validate_examples():
    assert validate(T_A) == []
    subdivided = MarkedMetricGraph(
        2,
        (0, 1),
        (Edge("x", 0, 0, Fraction(1)), Edge("y", 0, 1, Fraction(1)), Edge("z", 1, 0, Fraction(1))),
        frozenset({"y"}),
        (p("a"), p("b")),
    )
    assert any("degree-2 vertex" in d for d in validate(subdivided))
    bad_marking = rose(2, basis=[p("a"), p("a")])
    assert any("marking not an isomorphism" in d for d in validate(bad_marking))


def test_validate_other_diagnostics():
    zero = rose(2, lengths=[0, 1])
    assert any("nonpositive length" in d for d in validate(zero))
    no_tree = MarkedMetricGraph(2, (0, 1), theta().edges, frozenset(), (p("a"), p("b")))
    assert any("spanning tree" in d for d in validate(no_tree))
    wrong_rank = MarkedMetricGraph(3, T_A.vertices, T_A.edges, T_A.tree, (p("a"), p("b"), p("c")))
    assert any("Betti" in d for d in validate(wrong_rank))


def test_catalog_graphs_validate():
    for rank, types in CATALOG.items():
        for name, (nv, ends) in types.items():
            assert validate(graph_from_edges(rank, nv, ends)) == [], name


def test_circuit_to_word_examples():
    assert circuit_to_word(T_B, (2,)) == canonical_conjugacy(p("ab"))
    th = theta(basis=[p("a"), p("ab")])
    # edge 0 is the tree edge; edges 1 and 2 carry the two basis words
    expected = canonical_conjugacy(concat(p("a"), invert_word(p("ab"))))
    assert circuit_to_word(th, (2, -3)) == expected
    with pytest.raises(GraphError):
        circuit_to_word(th, (1, -1))


def test_translation_length_examples():
    assert translation_length(T_A, p("abAB")) == 4
    assert translation_length(T_A, p("a")) == 1
    assert translation_length(T_B, p("b")) == 2
    assert translation_length(T_A, ()) == 0


def test_translation_length_weighted_rose_oracle(rng):
    # on a standard-marked rose the length is the weighted letter count of the cyclic core
    G = rose(3, lengths=[Fraction(1, 2), 3, Fraction(7, 3)])
    weights = {1: Fraction(1, 2), 2: Fraction(3), 3: Fraction(7, 3)}
    for _ in range(200):
        w = random_word(rng, 3, rng.randint(1, 12))
        core = canonical_conjugacy(w)
        assert translation_length(G, w) == sum(weights[abs(x)] for x in core)


def test_translation_length_theta_hand_values():
    th = theta(lengths=[1, 2, 3])
    # circuits: e1 e0^-1 (length 3) and e2 e0^-1 (length 4); a b^-1 runs e1 e2^-1
    assert translation_length(th, p("a")) == 3
    assert translation_length(th, p("b")) == 4
    assert translation_length(th, p("aB")) == 5
    assert translation_length(th, p("ab")) == 3 + 4


def test_scale_volume_normalize():
    assert volume(T_A) == 2
    assert normalize_covolume(T_A).lengths == (Fraction(1, 2), Fraction(1, 2))
    assert translation_length(scale(T_A, 2), p("a")) == 2
    with pytest.raises(GraphError):
        scale(T_A, 0)


def test_act_examples(rng):
    assert act(T_A, Automorphism.identity(2)) == T_A
    for _ in range(100):
        G = random_marked_graph(2, rng)
        phi = random_automorphism(2, rng, rng.randint(1, 4))
        g = random_word(rng, 2, rng.randint(1, 8))
        assert translation_length(act(G, phi), g) == translation_length(G, apply(phi, g))


def test_act_composition_order(rng):
    # act(act(T, phi), psi) = act(T, phi . psi)
    for _ in range(30):
        G = random_marked_graph(3, rng)
        phi = random_automorphism(3, rng, 3)
        psi = random_automorphism(3, rng, 3)
        lhs = act(act(G, phi), psi)
        rhs = act(G, compose(phi, psi))
        assert equal_in_cv(lhs, rhs)
        for _ in range(5):
            g = random_word(rng, 3, 6)
            assert translation_length(lhs, g) == translation_length(rhs, g)


def test_random_marked_graph_deterministic_and_valid():
    assert random_marked_graph(2, 11) == random_marked_graph(2, 11)
    for seed in range(40):
        for rank in (2, 3, 4):
            assert validate(random_marked_graph(rank, seed)) == []
    assert not equal_in_cv(random_marked_graph(2, 1), random_marked_graph(2, 2))


def test_equal_in_cv_examples():
    assert equal_in_cv(T_A, T_A)
    assert not equal_in_cv(T_A, T_B)
    inner = Automorphism.parse("baB b")
    assert equal_in_cv(T_A, act(T_A, inner))


def test_equal_in_cv_uses_graph_symmetry():
    swap = Automorphism.parse("b a")
    assert equal_in_cv(T_A, act(T_A, swap))
    lopsided = rose(2, lengths=[1, 2])
    assert not equal_in_cv(lopsided, act(lopsided, swap))
    assert not equal_in_cv(T_A, scale(T_A, 2))


def test_equal_in_cv_rank_mismatch():
    with pytest.raises(GraphError):
        equal_in_cv(T_A, rose(3))


def test_equal_in_cv_equivalence_on_samples(rng):
    graphs = []
    for seed in range(12):
        G = random_marked_graph(2, seed, max_numerator=2, max_denominator=1)
        graphs.append(G)
        # relabel by an inner automorphism: same point
        w = random_word(rng, 2, 3)
        inner = Automorphism(tuple(concat(w, (i,), invert_word(w)) for i in (1, 2)))
        graphs.append(act(G, inner))
    for G in graphs:
        assert equal_in_cv(G, G)
    for G in graphs:
        for H in graphs:
            assert equal_in_cv(G, H) == equal_in_cv(H, G)


def test_equal_points_agree_on_lengths():
    classes = list(enumerate_cyclic_words(2, 8))
    pairs = []
    for seed in range(6):
        G = random_marked_graph(2, seed)
        w = p("ab")
        inner = Automorphism(tuple(concat(w, (i,), invert_word(w)) for i in (1, 2)))
        pairs.append((G, act(G, inner)))
    pairs.append((T_A, act(T_A, Automorphism.parse("b a"))))
    for G, H in pairs:
        assert equal_in_cv(G, H)
        for w in classes:
            assert translation_length(G, w) == translation_length(H, w)


def test_length_invariants(rng):
    for _ in range(100):
        G = random_marked_graph(rng.choice([2, 3]), rng)
        g = random_word(rng, G.rank, rng.randint(1, 8))
        h = random_word(rng, G.rank, rng.randint(0, 5))
        lg = translation_length(G, g)
        assert lg > 0
        assert translation_length(G, concat(h, g, invert_word(h))) == lg
        n = rng.randint(1, 4)
        assert translation_length(G, power(g, n)) == n * lg


def test_json_round_trip(tmp_path):
    for seed in range(10):
        G = random_marked_graph(3, seed)
        text = G.to_json()
        H = MarkedMetricGraph.from_json(text)
        assert H == G
        assert H.to_json() == text


def test_json_schema_fields():
    d = T_B.to_dict()
    assert d["rank"] == 2 and d["basis"] == ["a", "ab"]
    assert d["edges"][0] == {"id": "e0", "from": 0, "to": 0, "length": "1"}
    half = normalize_covolume(T_B).to_dict()
    assert half["edges"][1]["length"] == "1/2"


def test_from_dict_malformed():
    with pytest.raises(GraphError):
        MarkedMetricGraph.from_dict({"rank": 2})
