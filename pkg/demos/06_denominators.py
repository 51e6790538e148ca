"""
Denominators other than two
===========================

"""

from sclkit import scl_engine
from sclkit.oracle import null_homologous_words
from sclkit.words import Alphabet, canonicalize_terms, parse_chain

AB = Alphabet("a,b")

# every short word has the same value
print(sorted({str(scl_engine.scl(canonicalize_terms([(w, 1)], AB))) for w in null_homologous_words(6)}))

# longer words and chains reach other denominators
for text in ["aaabABAbAB", "3*b - 3*aaBB + aaaaaaBBBBBBBBB"]:
    print(text, scl_engine.scl(parse_chain(text, AB)))
