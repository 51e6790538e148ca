from fractions import Fraction

import pytest

from sclkit.oracle import (LimitExceeded, corner_data, corpus_check, null_homologous_words,
                           oracle_scl)
from sclkit.scl_engine import build_encoding
from sclkit.surface import assemble
from sclkit.words import Alphabet, chain_inverse_normalize, parse_chain

AB = Alphabet("a,b")


def test_oracle_examples():
    r = oracle_scl(parse_chain("abAB", AB), 1)
    assert r.bound == Fraction(1, 2) and r.examined == 1 and r.rectangles == 2 and r.polygons == 1
    assert oracle_scl([((1,), 1), ((-1,), 1)], 1).bound == 0
    r = oracle_scl(parse_chain("ab + B + A", AB), 1)
    # a can only meet A and b only B, so there is a single pairing
    assert r.bound == Fraction(1, 2) and r.examined == 1


def test_oracle_limit():
    with pytest.raises(LimitExceeded):
        oracle_scl(parse_chain("aabbAABB", AB), 2, limit=5)


def test_oracle_rejects_non_boundary():
    with pytest.raises(ValueError):
        oracle_scl(parse_chain("a", AB), 1)


def test_corpus_check_small():
    rep = corpus_check([parse_chain("abAB", AB)], n_max=1)
    assert rep.ok and len(rep.equal) == 1
    rep = corpus_check([[((1,), 1), ((-1,), 1)]], n_max=1)
    assert rep.ok and len(rep.equal) == 1
    assert "no violations" in rep.render()


def test_bound_monotone_under_multiples():
    c = parse_chain("aabABAbB + ab - ba".replace("aabABAbB", "abAB"), AB)
    b1 = oracle_scl(c, 1).bound
    b2 = oracle_scl(c, 2).bound
    assert b2 <= b1


def test_word_corpus():
    ws = null_homologous_words(6)
    assert (1, 2, -1, -2) in ws
    assert all(len(w) % 2 == 0 for w in ws)


@pytest.mark.parametrize("text", ["abAB", "ab + B + A", "aabAAB + ab - ba", "abAABB + ab"])
def test_cycle_count_matches_assembled_surface(text):
    """At degree one every copy is its own circle, so oracle positions are encoder positions."""
    c = chain_inverse_normalize(parse_chain(text, AB))
    loops = [(tuple(w), 1) for w, t in c.items() for _ in range(int(t))]
    best = oracle_scl(loops, 1)
    problem = build_encoding(loops)
    rects, cycles = corner_data(best)
    index = {pq: r for r, pq in enumerate(problem.rectangles)}
    counts = [0] * len(problem.rectangles)
    for pq in rects:
        counts[index[pq]] += 1
    sigma = best.pairing

    def node(p):
        q = sigma[p]
        r = index[(min(p, q), max(p, q))]
        return 2 * r if p < q else 2 * r + 1

    S = assemble((problem, counts, [(tuple(node(p) for p in cyc), 1) for cyc in cycles]))
    assert S.chi() == best.polygons - best.rectangles
    assert Fraction(-S.chi(), 2) == best.bound
