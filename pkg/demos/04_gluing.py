"""
Closed surfaces realizing the norm
==================================

"""

from pathlib import Path

from sclkit import graph_groups as gg
from sclkit import gluing

here = Path(__file__).parent / "graphs"

# two free groups glued along their commutators: a genus two surface
G = gg.parse_graph((here / "double.gg").read_text())
out = gluing.build_closed_surface(G, [1, -1])
print(out.genera, out.n, out.certificate, gluing.certify(out, G, [1, -1]))

# uneven extremal degrees need covers before the pieces line up
G = gg.parse_graph("vertex u gens=a,b\nvertex v gens=c,d\n"
                   "edge e from=u to=v wfrom=aaabABAbAB wto=cdCD\n")
out = gluing.build_closed_surface(G, [1, -1])
print("\n".join(out.plan))
print(out.genera, out.n, out.norm, out.certificate)
