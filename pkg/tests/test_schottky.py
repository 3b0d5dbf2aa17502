import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import quiet_domain
from oracles import apply_word, reduced_words
from uniform_inclusions.geometry import Circle, CircularDomain
from uniform_inclusions.schottky import (
    TruncationTooDeepError,
    convergence_report,
    enumerate_group,
    level_count,
    reduce_word,
)


def _circles(dom):
    return [(c.center, c.radius) for c in dom.circles]


@pytest.mark.parametrize("n,s,count", [(1, 1, 0), (2, 0, 1), (2, 1, 2), (2, 2, 2), (3, 1, 6), (3, 2, 24), (4, 2, 108)])
def test_level_count(n, s, count):
    assert level_count(n, s) == count


def test_enumeration_matches_word_count_and_order(triple_domain):
    g = enumerate_group(triple_domain, 3)
    assert len(g) == sum(level_count(3, s) for s in range(4))
    words = [e.word for e in g]
    assert len(set(words)) == len(words)
    assert sorted(words, key=lambda w: (len(w), w)) == words
    assert set(words) == set(reduced_words(3, 3))
    assert list(g.levels) == [len(w) // 2 for w in words]


def test_elements_equal_successive_reflections(triple_domain):
    g = enumerate_group(triple_domain, 3)
    circles = _circles(triple_domain)
    z = np.array([0.1 + 0.05j, 3.5 - 2j, -4 + 1j])
    for e in g:
        assert np.allclose(e.map(z), apply_word(circles, e.word, z), atol=1e-12)


def test_orbit_shape_and_identity(pair_domain):
    g = enumerate_group(pair_domain, 2)
    z = np.array([[0.0, 3j], [4.0, -3.0]])
    orb = g.orbit(z)
    assert orb.shape == (len(g), 2, 2)
    assert np.allclose(orb[0], z)
    assert np.allclose(g.orbit(z, [0, 1]), orb[:2])


def test_generator_is_T_j_T_0():
    dom = CircularDomain((Circle(0, 1), Circle(1.5, 1)))
    g = enumerate_group(dom, 0)
    s1 = g.generator(1)
    assert len(g) == 1
    assert abs(s1(0) - 1.5) < 1e-15
    z = 0.3 + 0.7j
    assert abs(s1(z) - (1.25 * z - 1.5) / (1.5 * z - 1)) < 1e-14


def test_convergence_term_of_generator():
    dom = CircularDomain((Circle(0, 1), Circle(1.5, 1)))
    rep = convergence_report(enumerate_group(dom, 1))
    g = enumerate_group(dom, 1)
    terms = {e.word: abs(e.map.determinant) / abs(e.map.c) ** 2 for e in g if e.word}
    assert terms[(1, 0)] == pytest.approx(1 / 2.25, rel=1e-14)
    assert rep.level_sums[0] == pytest.approx(sum(terms.values()))


def test_element_lookup_and_inverse_words(pair_domain):
    g = enumerate_group(pair_domain, 3)
    for e in g:
        inv = g.element(e.reversed_word())
        assert (e.map @ inv.map).is_identity(atol=1e-10)


@given(st.lists(st.integers(0, 2), max_size=12))
def test_reduce_word_cancels_pairs(word):
    r = reduce_word(word)
    assert all(r[i] != r[i + 1] for i in range(len(r) - 1))
    assert reduce_word(r) == r
    # applying the unreduced word acts like the reduced one
    circles = [(0j, 1.0), (3 + 0j, 1.0), (-1 + 3j, 0.7)]
    z = 7 + 5j
    assert np.isclose(apply_word(circles, tuple(word), z), apply_word(circles, r, z), atol=1e-8)


def test_single_circle_group_is_trivial():
    g = enumerate_group(CircularDomain((Circle(0, 1),)), 4)
    assert len(g) == 1
    assert convergence_report(g).verdict == "converging"


def test_element_cap():
    dom = quiet_domain([Circle(-4, 1), Circle(0, 1), Circle(4, 1), Circle(8j, 1)])
    with pytest.raises(TruncationTooDeepError):
        enumerate_group(dom, 6, element_cap=10_000)
    with pytest.raises(ValueError):
        enumerate_group(dom, -1)


def test_convergence_report_well_separated(pair_domain):
    rep = convergence_report(enumerate_group(pair_domain, 4))
    assert rep.verdict == "converging"
    assert len(rep.level_sums) == 4
    assert all(a > b for a, b in zip(rep.level_sums, rep.level_sums[1:]))
    assert rep.ratio == pytest.approx(rep.level_sums[-1] / rep.level_sums[-2])
    assert rep.tail_estimate == rep.level_sums[-1]
    assert rep.remainder_estimate == pytest.approx(rep.level_sums[-1] * rep.ratio / (1 - rep.ratio))
    assert np.allclose(rep.partial_sums, np.cumsum(rep.level_sums))
    d = rep.to_dict()
    assert d["verdict"] == "converging" and len(d["level_sums"]) == 4


def test_convergence_slows_for_nearly_touching_circles():
    far = convergence_report(enumerate_group(quiet_domain([Circle(-1.5, 1), Circle(1.5, 1)]), 4))
    near = convergence_report(enumerate_group(quiet_domain([Circle(-1.001, 1), Circle(1.001, 1)]), 4))
    assert near.ratio > 0.5
    assert near.ratio > 10 * far.ratio
    assert near.verdict in ("inconclusive", "converging")


def test_convergence_report_needs_two_levels(pair_domain):
    rep = convergence_report(enumerate_group(pair_domain, 1))
    assert rep.verdict == "inconclusive"
    assert rep.ratio is None
