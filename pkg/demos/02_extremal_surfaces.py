"""
Extremal surfaces from LP solutions
===================================

"""

from fractions import Fraction

from sclkit import oracle, scl_engine, surface
from sclkit.words import Alphabet, parse_chain

AB = Alphabet("a,b")

full = scl_engine.scl_full(parse_chain("aaabABAbAB", AB))
S = surface.assemble(full.result)
print(S.summary())

# chi over twice the degree recovers the value
print(Fraction(-S.chi_minus(), 2 * full.result.degree), "==", full.value)

# every boundary circle wraps the word a positive number of times
for bc in S.boundary_components():
    print(bc.tag, bc.degree)

# the brute-force search only sees degree one and two surfaces, so it stays above
for n in (1, 2):
    print(n, oracle.oracle_scl(parse_chain("aaabABAbAB", AB), n).bound)

# a cyclic cover multiplies chi and lifts each circle with the order of its value
P = surface.assemble(scl_engine.scl_full(parse_chain("ab + B + A", AB)).result)
print([bc.degree for bc in P.boundary_components()], P.genus())
cover = surface.cyclic_cover(P, surface.CoverSpec(4, (1, 1, 2)))
print(P.chi(), cover.chi(), [bc.degree for bc in cover.boundary_components()])
