"""
Exact scl values in the free group of rank two
==============================================

"""

from sclkit import scl_engine
from sclkit.words import Alphabet, parse_chain

AB = Alphabet("a,b")

# a commutator, a chain that cancels, a product of two letters, and a lone generator
for text in ["abAB", "a + A", "ab + B + A", "a"]:
    print(f"scl({text}) = {scl_engine.scl(parse_chain(text, AB))}")

# values are homogeneous: doubling the chain doubles scl
c = parse_chain("abAB + aabbAABB", AB)
print(scl_engine.scl(c), scl_engine.scl(2 * c))

# rational coefficients are fine as long as the chain is null-homologous
print(scl_engine.scl(parse_chain("abAB + 1/2*ab + 1/2*AB", AB)))

# the result carries a dual certificate that can be checked on its own
full = scl_engine.scl_full(parse_chain("aabbAABB", AB))
print(full.value, full.result.dual_value, scl_engine.verify_certificate(full.result))
