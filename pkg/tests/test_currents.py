import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outerspace.automorphisms import Automorphism, apply
from outerspace.currents import (
    CurrentError,
    WordTooLong,
    add,
    consistent,
    counting_coords,
    cylinder_weight,
    de_bruijn_word,
    flip_symmetric,
    full_support_witness,
    intersection_length,
    iterate_iwip,
    normalize_projective,
    projective_distance,
    scale,
    total_mass,
)
from outerspace.graphs import act, random_automorphism, random_marked_graph, rose, scale as scale_graph
from outerspace.words import concat, cyclic_length, invert_word, parse_word, power

from conftest import nontrivial_words, words

p = parse_word
FIB = Automorphism.parse("ab a")


def test_counting_examples():
    mu = counting_coords(p("aa"), 1)
    assert mu[p("a")] == mu[p("A")] == 2
    mu = counting_coords(p("ab"), 1)
    assert mu[p("a")] == mu[p("b")] == 1
    mu = counting_coords(p("a"), 2)
    assert mu[p("aa")] == 1


def test_counting_rejects_identity():
    with pytest.raises(CurrentError):
        counting_coords((), 2)


def test_linear_structure():
    mu = counting_coords(p("abb"), 3)
    assert scale(mu, 0).is_zero()
    assert add(counting_coords(p("a"), 1), counting_coords(p("a"), 1)) == counting_coords(p("aa"), 1)
    nu = counting_coords(p("aB"), 3)
    assert add(mu, nu) == add(nu, mu)
    with pytest.raises(CurrentError):
        add(mu, counting_coords(p("a"), 2))


def test_projective_examples():
    mu = normalize_projective(counting_coords(p("abAAb"), 3))
    assert projective_distance(mu, mu) == 0
    for k in (1, 2, 3):
        assert normalize_projective(counting_coords(p("aB"), k)) == normalize_projective(
            counting_coords(p("aBaB"), k)
        )
    assert projective_distance(counting_coords(p("a"), 1, 2), counting_coords(p("b"), 1, 2)) == 2
    with pytest.raises(CurrentError):
        normalize_projective(scale(mu, 0))


@settings(max_examples=200, deadline=None)
@given(nontrivial_words(rank=3, max_size=10), st.integers(1, 4))
def test_counting_invariants(g, k):
    mu = counting_coords(g, k, 3)
    assert flip_symmetric(mu)
    assert consistent(mu)
    assert total_mass(mu) == cyclic_length(g)
    assert counting_coords(invert_word(g), k, 3) == mu


@settings(max_examples=100, deadline=None)
@given(nontrivial_words(max_size=8), words(max_size=5), st.integers(1, 3), st.integers(1, 3))
def test_counting_class_function_and_powers(g, h, k, n):
    mu = counting_coords(g, k, 2)
    assert counting_coords(concat(h, g, invert_word(h)), k, 2) == mu
    assert counting_coords(power(g, n), k, 2) == scale(mu, n)


def test_cylinder_weight_matches_coords():
    g = p("abAbbaB")
    mu = counting_coords(g, 3)
    for v, c in mu.weights.items():
        assert cylinder_weight(g, v) == c


def test_intersection_examples(rng):
    for _ in range(50):
        T = random_marked_graph(2, rng)
        g = tuple(x for x in p("aBBab"))
        assert intersection_length(T, power(g, 2)) == 2 * intersection_length(T, g)
        c = Fraction(rng.randint(1, 7), rng.randint(1, 5))
        assert intersection_length(scale_graph(T, c), g) == c * intersection_length(T, g)
        phi = random_automorphism(2, rng, 3)
        assert intersection_length(act(T, phi), g) == intersection_length(T, apply(phi, g))
    with pytest.raises(CurrentError):
        intersection_length(rose(2), ())


def fibonacci_ratio_oracle(n):
    """a-frequency of phi^n(b) from the Fibonacci recurrence."""
    a, b = 0, 1  # letter counts of b
    for _ in range(n):
        a, b = a + b, a
    return Fraction(a, a + b)


def test_iwip_fibonacci_convergence():
    report = iterate_iwip(FIB, p("b"), 40, 1)
    assert report.converged
    n = report.converged_at
    weight = report.coords[-1][(1,)]
    assert weight == fibonacci_ratio_oracle(n)
    assert abs(float(weight) - (math.sqrt(5) - 1) / 2) < 1e-6


def test_iwip_identity_is_constant():
    report = iterate_iwip(Automorphism.identity(2), p("abb"), 5, 2, stop_on_convergence=False)
    assert all(d == 0 for d in report.distances)
    assert len(report.coords) == 6


def test_iwip_two_limits():
    fwd = iterate_iwip(FIB, p("b"), 40, 2)
    bwd = iterate_iwip(FIB.inverse(), p("b"), 40, 2)
    assert fwd.converged and bwd.converged
    assert projective_distance(fwd.coords[-1], bwd.coords[-1]) > Fraction(1, 10)


def test_iwip_length_cap():
    with pytest.raises(WordTooLong):
        iterate_iwip(FIB, p("b"), 40, 1, max_word_length=100, stop_on_convergence=False)


def test_iteration_report_json():
    import json

    report = iterate_iwip(FIB, p("b"), 5, 1, stop_on_convergence=False)
    data = json.loads(report.to_json())
    assert [r["n"] for r in data["steps"]] == [1, 2, 3, 4, 5]


def test_de_bruijn_word_covers_all_pairs():
    v = de_bruijn_word(2)
    pairs = {v[i : i + 2] for i in range(len(v) - 1)}
    assert len(pairs) == 12
    assert all(v[i] != -v[i + 1] for i in range(len(v) - 1))


def test_full_support_witness():
    report = full_support_witness(2, 6)
    assert report.ok and report.primitives_scanned > 0
    v = report.witness
    assert cylinder_weight(v, v) >= 1


def test_coords_csv():
    text = counting_coords(p("ab"), 1).to_csv()
    assert text.splitlines() == ["word,weight", "a,1", "A,1", "b,1", "B,1"]
