"""
Baumslag-Solitar witnesses
==========================

"""

from pathlib import Path

from sclkit import graph_groups as gg
from sclkit import gluing

here = Path(__file__).parent / "graphs"

# an HNN extension of Z conjugating a to a^2
G = gg.parse_graph((here / "bs12.gg").read_text())
print(gg.presentation(G))
w = gluing.build_closed_surface(G, [1, -1])
print(w.kind, w.location)
print(w.explanation)

# a self-edge with equal ends is a torus
G = gg.parse_graph((here / "torus.gg").read_text())
print(gluing.build_closed_surface(G, [1, -1]).kind)

# commutators share no powers, so the double has no witness
print(gluing.find_witnesses(gg.parse_graph((here / "double.gg").read_text())))
