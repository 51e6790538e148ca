import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sclkit.oracle import oracle_scl, random_chain
from sclkit.scl_engine import (NotNullHomologous, build_encoding, fill_norm, scl, scl_full,
                               scl_on_subspace, solve_scl, verify_certificate)
from sclkit.words import Alphabet, Word, canonicalize_terms, chain_inverse_normalize, parse_chain

AB = Alphabet("a,b")


def chain(text):
    return parse_chain(text, AB)


def test_encoding_counts_commutator():
    p = build_encoding(chain("abAB"))
    assert len(p.positions) == 4
    assert p.rectangles == [(0, 2), (1, 3)]
    assert len(p.node_after) == 4 and len(p.arcs) == 4


def test_encoding_counts_annulus():
    p = build_encoding([((1,), 1), ((-1,), 1)])
    assert len(p.positions) == 2 and len(p.rectangles) == 1
    assert len(p.node_after) == 2 and len(p.arcs) == 2


def test_encoding_rejects_boundaryless():
    with pytest.raises(NotNullHomologous):
        build_encoding(chain("a"))


def test_no_self_loop_arcs():
    p = build_encoding(chain_inverse_normalize(chain("aabABAbB + ab - ba")))
    assert all(u != v for u, v in p.arcs)


def test_solve_commutator():
    res = solve_scl(build_encoding(chain("abAB")))
    assert res.value == Fraction(1, 2)
    assert res.rect_weights == [1, 1]
    assert [len(c) for c, _ in res.cycles] == [4] and res.degree == 1
    assert verify_certificate(res)


def test_solve_annulus_and_pants():
    res = solve_scl(build_encoding([((1,), 1), ((-1,), 1)]))
    assert res.value == 0 and len(res.cycles) == 1 and len(res.cycles[0][0]) == 2
    assert scl("ab + B + A") == Fraction(1, 2)


def test_front_end_values():
    assert scl("abAB") == Fraction(1, 2)
    assert scl("a + A") == 0
    assert scl("a") == math.inf
    assert fill_norm("abAB") == 2 and fill_norm("a + A") == 0 and fill_norm("a") == math.inf


def test_aaBB_is_not_a_boundary():
    # the exponent sums of aaBB are (2, -2), so it bounds nothing
    assert scl("aaBB") == math.inf
    s = scl("aabbAABB")
    assert 0 <= s <= oracle_scl(chain("aabbAABB"), 1).bound
    assert scl("2*aabbAABB") == 2 * s


def test_subspace():
    c = chain("abAB")
    assert scl_on_subspace([c, c], [1, 1]) == 1
    assert scl_on_subspace([c, c], [0, 0]) == 0
    assert scl_on_subspace([c, chain("a + A")], [1, 5]) == Fraction(1, 2)


def test_known_value_with_odd_denominator():
    assert scl("aaabABAbAB") == Fraction(5, 6)


def _letters(c):
    return sum(len(w) * abs(t) for w, t in c.items())


chains = st.integers(0, 10 ** 6).map(lambda s: random_chain(random.Random(s), terms=2, max_length=4))
short_chains = st.integers(0, 10 ** 6).map(
    lambda s: random_chain(random.Random(s), terms=1, max_length=3, max_letters=7))


@settings(max_examples=25, deadline=None)
@given(chains, st.integers(1, 4))
def test_homogeneity(c, k):
    assert scl(k * c) == k * scl(c)


@settings(max_examples=25, deadline=None)
@given(chains, st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3))
def test_conjugation_and_inverse(c, h):
    s = scl(c)
    h = Word(h)
    conj = canonicalize_terms([(h * Word(w) * h.inverse(), t) for w, t in c.items()], AB)
    assert scl(conj) == s
    assert scl(c.inverse()) == s
    assert s >= 0


@settings(max_examples=20, deadline=None)
@given(short_chains, short_chains)
def test_subadditivity(c, d):
    assert scl(c + d) <= scl(c) + scl(d)


@settings(max_examples=25, deadline=None)
@given(chains)
def test_certificates_and_extremal_surface(c):
    full = scl_full(c)
    if full.result is None:
        return
    res = full.result
    assert verify_certificate(res)
    assert res.dual_value == res.value
    assert Fraction(-res.chi, 2 * res.degree) == res.value


@settings(max_examples=15, deadline=None)
@given(chains)
def test_oracle_dominates(c):
    full = scl_full(c)
    if full.result is None or _letters(full.chain) > 10:
        return
    bound = oracle_scl(full.chain, 1, 10 ** 6).bound
    assert bound >= full.value * full.scale
