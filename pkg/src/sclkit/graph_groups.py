"""Graphs of free groups with cyclic edge groups.

Second homology is read off in edge-end coordinates: a class assigns an
integer ``n[e.end]`` to every end of every edge, and lies in the kernel of
the Mayer-Vietoris map sending an end to the abelianization of its attaching
word plus the core circle of its edge annulus.  The norm of a class is four
times the sum over vertices of scl of the vertex boundary chains.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exact
from .scl_engine import scl
from .words import (Alphabet, Chain, WordError, abelianize, canonicalize_terms,
                    parse_word)

log = logging.getLogger(__name__)

ENDS = ("from", "to")


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    pass


class DisconnectedGraph(GraphError):
    pass


class TrivialAttachingWord(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class NotInKernel(GraphError):
    pass


class DepthExceeded(RuntimeError):
    pass


class IndependenceViolation(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    target: str
    wfrom: tuple[int, ...]
    wto: tuple[int, ...]

    def vertex(self, end: str) -> str:
        return self.source if end == "from" else self.target

    def word(self, end: str) -> tuple[int, ...]:
        return self.wfrom if end == "from" else self.wto


@dataclass(frozen=True)
class GraphOfGroups:
    vertices: dict[str, Alphabet]
    edges: tuple[Edge, ...]

    @property
    def ends(self) -> list[tuple[str, str]]:
        """Coordinates of a class: ``(edge name, end)`` in file order."""
        return [(e.name, end) for e in self.edges for end in ENDS]

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def render_word(self, vertex: str, letters: Sequence[int]) -> str:
        return self.vertices[vertex].render(letters)

    def describe(self) -> str:
        lines = [f"vertex {v} gens={','.join(a.names)}" for v, a in self.vertices.items()]
        for e in self.edges:
            lines.append(f"edge {e.name} from={e.source} to={e.target} "
                         f"wfrom={self.render_word(e.source, e.wfrom)} wto={self.render_word(e.target, e.wto)}")
        return "\n".join(lines) + "\n"


_KV = re.compile(r"^([a-z]+)=(.*)$")


def parse_graph(text: str) -> GraphOfGroups:
    """Read the line format ``vertex NAME gens=a,b`` / ``edge NAME from=V to=W wfrom=.. wto=..``."""
    vertices: dict[str, Alphabet] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if len(parts) < 2:
            raise ParseError(f"line {lineno}: missing name")
        name, fields = parts[1], {}
        for tok in parts[2:]:
            m = _KV.match(tok)
            if not m:
                raise ParseError(f"line {lineno}: expected key=value, got {tok!r}")
            fields[m.group(1)] = m.group(2)
        try:
            if kind == "vertex":
                if set(fields) != {"gens"}:
                    raise ParseError(f"line {lineno}: vertex takes exactly gens=")
                if name in vertices:
                    raise ParseError(f"line {lineno}: duplicate vertex {name}")
                vertices[name] = Alphabet(fields["gens"])
            elif kind == "edge":
                if set(fields) != {"from", "to", "wfrom", "wto"}:
                    raise ParseError(f"line {lineno}: edge takes from=, to=, wfrom=, wto=")
                if any(e.name == name for e in edges):
                    raise ParseError(f"line {lineno}: duplicate edge {name}")
                ends = []
                for end in ENDS:
                    v = fields[end]
                    if v not in vertices:
                        raise UnknownVertex(f"line {lineno}: unknown vertex {v!r}")
                    w = tuple(parse_word(fields["w" + end], vertices[v]))
                    if not w:
                        raise TrivialAttachingWord(f"line {lineno}: {fields['w' + end]!r} is trivial")
                    if w[0] == -w[-1]:
                        raise ParseError(f"line {lineno}: attaching word {fields['w' + end]!r} "
                                         "is not cyclically reduced")
                    ends.append((v, w))
                edges.append(Edge(name, ends[0][0], ends[1][0], ends[0][1], ends[1][1]))
            else:
                raise ParseError(f"line {lineno}: unknown directive {kind!r}")
        except WordError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if not vertices:
        raise ParseError("no vertices")
    G = GraphOfGroups(vertices, tuple(edges))
    tree = _bfs_tree(G)
    if len(tree[1]) != len(vertices):
        raise DisconnectedGraph("the underlying graph is not connected")
    return G


def _bfs_tree(G: GraphOfGroups) -> tuple[set[str], list[str]]:
    """Tree edges of a breadth-first maximal subtree from the first vertex in name order."""
    root = min(G.vertices)
    reached = [root]
    seen = {root}
    tree: set[str] = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in G.edges:
            for a, b in ((e.source, e.target), (e.target, e.source)):
                if a == v and b not in seen:
                    seen.add(b)
                    reached.append(b)
                    tree.add(e.name)
                    queue.append(b)
    return tree, reached


def presentation(G: GraphOfGroups) -> str:
    """A presentation of the fundamental group, with tree edges killed."""
    tree, _ = _bfs_tree(G)
    gens: list[str] = []
    owner: dict[str, str] = {}
    for v, alpha in G.vertices.items():
        for s in alpha.names:
            if s in owner:
                gens.append(f"{s}_{v}")
            else:
                gens.append(s)
            owner.setdefault(s, v)
    clash = len(gens) != len(set(gens)) or any("_" in g for g in gens)
    stable = {}
    used = {g for g in gens}
    for e in G.edges:
        if e.name not in tree:
            letter = e.name if e.name not in used else f"t_{e.name}"
            stable[e.name] = letter
            used.add(letter)

    def word(v: str, letters) -> str:
        names = G.vertices[v]
        out = []
        for x in letters:
            s = names.symbol(x)
            base = s.lower()
            if owner.get(base) != v:
                base = f"{base}_{v}"
                s = base if x > 0 else base.upper()
            out.append(s)
        return "".join(out) if not clash else " ".join(out)

    rels = []
    for e in G.edges:
        lhs = word(e.source, e.wfrom)
        rhs = word(e.target, e.wto)
        if e.name in tree:
            rels.append(f"{lhs} = {rhs}")
        else:
            t = stable[e.name]
            rels.append(f"{t} {lhs} {t}^-1 = {rhs}")
    all_gens = gens + list(stable.values())
    return f"< {', '.join(all_gens)} | {'; '.join(rels)} >"


# ------------------------------------------------------------------ homology

def mv_matrix(G: GraphOfGroups) -> list[list[int]]:
    """Rows: vertex generators (in vertex order), then one core row per edge."""
    ends = G.ends
    rows = []
    for v, alpha in G.vertices.items():
        block = [[0] * len(ends) for _ in range(alpha.rank)]
        for col, (name, end) in enumerate(ends):
            e = G.edge(name)
            if e.vertex(end) == v:
                for k, x in enumerate(abelianize(e.word(end), alpha.rank)):
                    block[k][col] += x
        rows += block
    for k, e in enumerate(G.edges):
        row = [0] * len(ends)
        row[2 * k] = row[2 * k + 1] = 1
        rows.append(row)
    return rows


def h2_lattice(G: GraphOfGroups) -> list[list[int]]:
    if not G.edges:
        return []
    basis = exact.kernel_lattice_basis(mv_matrix(G), ncols=2 * len(G.edges))
    for v in basis:
        for k in range(len(G.edges)):
            assert v[2 * k] + v[2 * k + 1] == 0, "edge balance fails"
    return basis


def h2_rank(G: GraphOfGroups) -> int:
    if not G.edges:
        return 0
    return 2 * len(G.edges) - exact.matrix_rank(mv_matrix(G))


def class_vector(G: GraphOfGroups, A) -> list[Fraction]:
    """Accepts a vector, a mapping ``{"e.from": n}`` or a literal ``"e1.from=1,e1.to=-1"``."""
    ends = G.ends
    if isinstance(A, str):
        vals = {}
        for part in A.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ParseError(f"bad class entry {part!r}")
            key, val = part.split("=", 1)
            try:
                vals[key.strip()] = Fraction(val.strip())
            except ValueError:
                raise ParseError(f"bad coefficient in {part!r}") from None
        A = vals
    if isinstance(A, Mapping):
        known = {f"{n}.{end}" for n, end in ends}
        for key in A:
            if key not in known:
                raise ParseError(f"unknown edge end {key!r}")
        return [Fraction(A.get(f"{n}.{end}", 0)) for n, end in ends]
    vec = [Fraction(x) for x in A]
    if len(vec) != len(ends):
        raise ParseError(f"class needs {len(ends)} coordinates")
    return vec


def in_kernel(G: GraphOfGroups, A) -> bool:
    vec = class_vector(G, A)
    return all(sum(Fraction(a) * x for a, x in zip(row, vec)) == 0 for row in mv_matrix(G))


def vertex_loops(G: GraphOfGroups, A, v: str) -> list[tuple[tuple[int, ...], Fraction, str]]:
    """The edge-end loops meeting ``v``: ``(w^sign, |n|, "edge.end")`` for nonzero ``n``."""
    vec = class_vector(G, A)
    out = []
    for (name, end), n in zip(G.ends, vec):
        e = G.edge(name)
        if e.vertex(end) != v or n == 0:
            continue
        w = e.word(end)
        if n < 0:
            w = tuple(-x for x in reversed(w))
        out.append((w, abs(n), f"{name}.{end}"))
    return out


def boundary_chain(G: GraphOfGroups, A, v: str) -> Chain:
    if not in_kernel(G, A):
        raise NotInKernel("the class is not in the Mayer-Vietoris kernel")
    loops = vertex_loops(G, A, v)
    return canonicalize_terms([(w, t) for w, t, _ in loops], G.vertices[v])


def gt_norm(G: GraphOfGroups, A, jobs: int = 1) -> Fraction:
    """Four times the sum of scl over the vertex boundary chains."""
    chains = [boundary_chain(G, A, v) for v in G.vertices]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            values = list(pool.map(scl, chains))
    else:
        values = [scl(c) for c in chains]
    return 4 * sum(values, Fraction(0))


# ---------------------------------------------------------------- unit ball

@dataclass(frozen=True)
class Cone:
    left: tuple[Fraction, Fraction]
    right: tuple[Fraction, Fraction]
    functional: tuple[Fraction, Fraction]


@dataclass
class NormBallFan:
    """Rays in plane coordinates ``(x, y)`` meaning ``x A1 + y A2``, in counterclockwise order."""

    basis: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    rays: list[tuple[Fraction, Fraction]]
    values: list[Fraction]
    cones: list[Cone]
    lineality: list[tuple[Fraction, Fraction]]
    vertices: list[tuple[Fraction, Fraction]]
    evaluations: int = 0

    @property
    def bounded(self) -> bool:
        return not self.lineality

    def norm(self, x, y) -> Fraction:
        """Evaluate the piecewise linear norm from the fan alone."""
        x, y = Fraction(x), Fraction(y)
        if x == y == 0:
            return Fraction(0)
        for c in self.cones:
            if _in_cone((x, y), c.left, c.right):
                return c.functional[0] * x + c.functional[1] * y
        raise AssertionError("fan does not cover the plane")

    def to_json(self) -> dict:
        s = str
        return {
            "basis": [[s(v) for v in b] for b in self.basis],
            "rays": [[s(a), s(b)] for a, b in self.rays],
            "values": [s(v) for v in self.values],
            "cones": [{"left": [s(v) for v in c.left], "right": [s(v) for v in c.right],
                       "functional": [s(v) for v in c.functional]} for c in self.cones],
            "lineality": [[s(a), s(b)] for a, b in self.lineality],
            "vertices": [[s(a), s(b)] for a, b in self.vertices],
            "bounded": self.bounded,
        }

    @classmethod
    def from_json(cls, d: dict) -> "NormBallFan":
        F = Fraction
        pair = lambda p: (F(p[0]), F(p[1]))
        return cls(
            tuple(tuple(F(v) for v in b) for b in d["basis"]),
            [pair(r) for r in d["rays"]], [F(v) for v in d["values"]],
            [Cone(pair(c["left"]), pair(c["right"]), pair(c["functional"])) for c in d["cones"]],
            [pair(r) for r in d["lineality"]], [pair(r) for r in d["vertices"]],
        )

    def __eq__(self, other):
        if not isinstance(other, NormBallFan):
            return NotImplemented
        return self.to_json() == other.to_json()


def _cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _in_cone(p, left, right) -> bool:
    return _cross(left, p) >= 0 and _cross(p, right) >= 0


def _solve2(u, v, nu, nv) -> tuple[Fraction, Fraction]:
    det = _cross(u, v)
    return ((nu * v[1] - nv * u[1]) / det, (u[0] * nv - v[0] * nu) / det)


def unit_ball_2d(G: GraphOfGroups, A1, A2, depth: int = 64, jobs: int = 1) -> NormBallFan:
    """Find the linear pieces of the norm on the plane spanned by ``A1`` and ``A2``.

    Starts from the six rays ``+-A1, +-A2, +-(A1 + A2)`` and bisects any
    cone on which the norm fails to be additive.
    """
    a1, a2 = class_vector(G, A1), class_vector(G, A2)
    if exact.matrix_rank([a1, a2]) < 2:
        raise IndependenceViolation("the two classes are linearly dependent")
    for a in (a1, a2):
        if not in_kernel(G, a):
            raise NotInKernel("basis class is not in the Mayer-Vietoris kernel")
    cache: dict[tuple[Fraction, Fraction], Fraction] = {}

    def N(r) -> Fraction:
        if r not in cache:
            cache[r] = gt_norm(G, [r[0] * x + r[1] * y for x, y in zip(a1, a2)], jobs)
        return cache[r]

    one, zero = Fraction(1), Fraction(0)
    seeds = [(one, zero), (one, one), (zero, one), (-one, zero), (-one, -one), (zero, -one)]
    certified: list[tuple] = []
    stack = [(seeds[k], seeds[(k + 1) % 6], 0) for k in range(6)]
    while stack:
        u, v, d = stack.pop()
        w = (u[0] + v[0], u[1] + v[1])
        if N(w) == N(u) + N(v):
            certified.append((u, v))
            continue
        if d + 1 > depth:
            raise DepthExceeded(f"cone subdivision exceeded depth {depth}")
        stack.append((w, v, d + 1))
        stack.append((u, w, d + 1))

    # order cones counterclockwise starting from +A1
    import math

    def angle(r):
        a = math.atan2(float(r[1]), float(r[0]))
        return a if a >= 0 else a + 2 * math.pi

    certified.sort(key=lambda c: angle(c[0]))
    cones = []
    for u, v in certified:
        f = _solve2(u, v, N(u), N(v))
        if cones and cones[-1].functional == f:
            cones[-1] = Cone(cones[-1].left, v, f)
        else:
            cones.append(Cone(u, v, f))
    if len(cones) > 1 and cones[0].functional == cones[-1].functional:
        cones[0] = Cone(cones[-1].left, cones[0].right, cones[0].functional)
        cones.pop()
    rays = [c.left for c in cones]
    values = [N(r) for r in rays]
    lineality = [r for r in rays if N(r) == 0]
    vertices = [(r[0] / N(r), r[1] / N(r)) for r in rays if N(r) != 0]
    return NormBallFan((tuple(a1), tuple(a2)), rays, values, cones, lineality, vertices, len(cache))
