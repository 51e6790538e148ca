from fractions import Fraction
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHAIN3, self_edge
from sclkit import exact
from sclkit.graph_groups import (DisconnectedGraph, IndependenceViolation, NormBallFan,
                                 NotInKernel, ParseError, TrivialAttachingWord, UnknownVertex,
                                 boundary_chain, gt_norm, h2_lattice, h2_rank, in_kernel,
                                 mv_matrix, parse_graph, presentation, unit_ball_2d)
from sclkit.words import Alphabet, parse_chain


def test_parse_examples(double):
    assert list(double.vertices) == ["u", "v"] and len(double.edges) == 1
    with pytest.raises(TrivialAttachingWord):
        parse_graph("vertex u gens=a,b\nvertex v gens=c,d\nedge e from=u to=v wfrom=aA wto=cdCD\n")
    with pytest.raises(DisconnectedGraph):
        parse_graph("vertex u gens=a,b\nvertex v gens=c,d\n")
    with pytest.raises(UnknownVertex):
        parse_graph("vertex u gens=a\nedge e from=u to=w wfrom=a wto=a\n")
    with pytest.raises(ParseError):
        parse_graph("vertex u gens=a\nedge e from=u\n")
    with pytest.raises(ParseError):
        parse_graph("vertex u gens=a,b\nedge e from=u to=u wfrom=abA wto=b\n")


def test_describe_roundtrip(chain3):
    assert parse_graph(chain3.describe()) == chain3


def test_presentation_examples(double):
    assert presentation(double) == "< a, b, c, d | abAB = cdCD >"
    assert presentation(self_edge("a", "a")) == "< a, s | s a s^-1 = a >"
    assert presentation(parse_graph("vertex x gens=a,b\n")) == "< a, b |  >"


def test_h2_examples(double):
    assert h2_lattice(double) == [[1, -1]]
    G = self_edge("abAB", "abAB", gens="a,b")
    assert h2_lattice(G) == [[1, -1]]
    assert h2_lattice(parse_graph("vertex x gens=a,b\n")) == []
    assert h2_lattice(self_edge("a", "aa")) == []


def test_h2_rank_formula(chain3):
    for G in (chain3, self_edge("a", "b", gens="a,b"), self_edge("a", "a")):
        assert len(h2_lattice(G)) == h2_rank(G) == 2 * len(G.edges) - exact.matrix_rank(mv_matrix(G))


def test_boundary_chain_examples(double):
    ab, cd = Alphabet("a,b"), Alphabet("c,d")
    assert boundary_chain(double, [1, -1], "u") == parse_chain("abAB", ab)
    assert boundary_chain(double, [1, -1], "v") == parse_chain("-cdCD", cd)
    assert len(boundary_chain(double, [0, 0], "u")) == 0
    with pytest.raises(NotInKernel):
        boundary_chain(double, [1, 0], "u")


def test_norm_examples(double):
    assert gt_norm(double, [1, -1]) == 4
    assert gt_norm(double, [0, 0]) == 0
    assert gt_norm(double, "e.from=2,e.to=-2") == 8
    assert gt_norm(double, [1, -1], jobs=2) == 4


def test_class_literals(double):
    with pytest.raises(ParseError):
        gt_norm(double, "e.side=1")
    assert in_kernel(double, {"e.from": 3, "e.to": -3})


def test_ball_hexagon(chain3):
    fan = unit_ball_2d(chain3, [1, -1, 0, 0], [0, 0, -1, 1])
    q = Fraction(1, 4)
    assert set(fan.vertices) == {(q, 0), (-q, 0), (0, q), (0, -q), (q, -q), (-q, q)}
    assert fan.bounded and len(fan.cones) == 6
    assert NormBallFan.from_json(fan.to_json()) == fan


def test_ball_rejects_dependent(double):
    with pytest.raises(IndependenceViolation):
        unit_ball_2d(double, [1, -1], [2, -2])


def test_ball_with_lineality():
    # two F(a) self-loops: annular pieces everywhere, so the norm vanishes
    G = parse_graph("vertex x gens=a\nvertex y gens=c\nedge e1 from=x to=y wfrom=a wto=c\n"
                    "edge e2 from=x to=y wfrom=a wto=c\nedge e3 from=x to=y wfrom=a wto=c\n")
    basis = h2_lattice(G)
    assert len(basis) == 2
    fan = unit_ball_2d(G, basis[0], basis[1])
    assert not fan.bounded and fan.lineality and fan.vertices == []


def test_chain3_basis_sign(chain3):
    # the plane coordinates of the hexagon use the second basis vector negated
    assert h2_lattice(chain3) == [[1, -1, 0, 0], [0, 0, 1, -1]]


def _rand_class(basis, rnd):
    coeffs = [Fraction(rnd.randint(-3, 3), rnd.randint(1, 2)) for _ in basis]
    return [sum(c * v[k] for c, v in zip(coeffs, basis)) for k in range(len(basis[0]))]


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_norm_properties(rnd):
    G = parse_graph(CHAIN3)
    basis = h2_lattice(G)
    for v in basis:
        assert all(v[2 * k] + v[2 * k + 1] == 0 for k in range(len(G.edges)))
    A, B = _rand_class(basis, rnd), _rand_class(basis, rnd)
    k = Fraction(rnd.randint(-4, 4), rnd.randint(1, 3))
    NA = gt_norm(G, A)
    assert gt_norm(G, [k * x for x in A]) == abs(k) * NA
    assert gt_norm(G, [-x for x in A]) == NA
    assert gt_norm(G, [a + b for a, b in zip(A, B)]) <= NA + gt_norm(G, B)


def test_cone_additivity(chain3):
    fan = unit_ball_2d(chain3, [1, -1, 0, 0], [0, 0, -1, 1])
    rnd = random.Random(7)
    for cone in fan.cones:
        for _ in range(10):
            s, t = Fraction(rnd.randint(1, 9)), Fraction(rnd.randint(1, 9))
            p = (s * cone.left[0] + t * cone.right[0], s * cone.left[1] + t * cone.right[1])
            A = [p[0] * x + p[1] * y for x, y in zip(fan.basis[0], fan.basis[1])]
            assert gt_norm(chain3, A) == cone.functional[0] * p[0] + cone.functional[1] * p[1]
