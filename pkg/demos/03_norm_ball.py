"""
Norm and unit ball for a chain of three free groups
===================================================

"""

from pathlib import Path

from sclkit import graph_groups as gg

here = Path(__file__).parent
G = gg.parse_graph((here / "graphs" / "chain3.gg").read_text())
print(gg.presentation(G))

basis = gg.h2_lattice(G)
print("H2 basis:", basis)

# the norm of each basis class, and of their sum and difference
A1, A2 = basis[0], [-x for x in basis[1]]
for A in (A1, A2, [x + y for x, y in zip(A1, A2)], [x - y for x, y in zip(A1, A2)]):
    print(A, gg.gt_norm(G, A))

# the unit ball on the plane they span is a hexagon
fan = gg.unit_ball_2d(G, A1, A2)
def pt(p):
    return "(" + ", ".join(map(str, p)) + ")"


for cone in fan.cones:
    print(pt(cone.left), "..", pt(cone.right), "N =", pt(cone.functional))
print(", ".join(map(pt, fan.vertices)))
