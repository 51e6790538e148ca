import sys

import pytest

from sclkit.graph_groups import parse_graph

DOUBLE = """
# two copies of F(a,b) glued along the commutator
vertex u gens=a,b
vertex v gens=c,d
edge e from=u to=v wfrom=abAB wto=cdCD
"""

CHAIN3 = """
vertex u gens=a,b
vertex v gens=c,d
vertex w gens=e,f
edge e1 from=u to=v wfrom=abAB wto=cdCD
edge e2 from=v to=w wfrom=cdCD wto=efEF
"""


@pytest.fixture
def double():
    return parse_graph(DOUBLE)


@pytest.fixture
def chain3():
    return parse_graph(CHAIN3)


def self_edge(wfrom, wto, gens="a"):
    return parse_graph(f"vertex x gens={gens}\nedge s from=x to=x wfrom={wfrom} wto={wto}\n")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.REPORT, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
