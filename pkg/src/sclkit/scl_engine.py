"""scl of free-group chains as an exact linear program.

A normal-form admissible surface is cut into rectangles, one for each pair
of mutually inverse letters it glues, and polygons that fill the corners.
A rectangle ``{p, q}`` has two vertical sides, ``(after p, before q)`` and
``(after q, before p)``.  A polygon is a directed cycle of vertical sides in
which each step ``u -> v`` satisfies ``before(v) = next(after(u))``.

With rectangle weights ``x`` and polygon weights ``t`` at degree one::

    minimize   (sum x - sum t) / 2
    subject to sum of x over rectangles containing p   = c_i   (p in word i)
               sum of t over polygons through side v    = x_rect(v)

The polygon family is infinite in principle, so polygon columns are
generated on demand: the pricer looks for a directed cycle whose dual
weight beats the current basis.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .words import (Alphabet, Chain, CyclicWord, WordError, abelianize,
                    chain_inverse_normalize, is_null_homologous, parse_chain)

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class NotNullHomologous(WordError):
    """The chain is not a boundary, so no admissible surface exists."""


@dataclass(frozen=True)
class Loop:
    word: tuple[int, ...]
    coeff: int
    tag: object = None


@dataclass
class SclProblem:
    loops: tuple[Loop, ...]
    positions: list[tuple[int, int]]
    letters: list[int]
    next_pos: list[int]
    rectangles: list[tuple[int, int]]
    node_after: list[int]
    node_before: list[int]
    arcs: list[tuple[int, int]]
    out_arcs: list[list[int]] = field(repr=False)
    rank: int = 0

    @property
    def nodes(self) -> list[tuple[int, int]]:
        return list(zip(self.node_after, self.node_before))

    def node_rect(self, v: int) -> int:
        return v // 2

    def position_index(self, i: int, j: int) -> int:
        return self.positions.index((i, j))


def _as_loops(c) -> tuple[tuple[Loop, ...], int]:
    if isinstance(c, Chain):
        if not c.is_integral() or any(t <= 0 for _, t in c.items()):
            raise ValueError("the encoder needs positive integral coefficients")
        return tuple(Loop(tuple(w), int(t), k) for k, (w, t) in enumerate(c.items())), c.alphabet.rank
    loops = []
    rank = 0
    for k, item in enumerate(c):
        if isinstance(item, Loop):
            loop = item
        else:
            word, coeff = item[0], item[1]
            tag = item[2] if len(item) > 2 else k
            loop = Loop(tuple(word), int(coeff), tag)
        if loop.coeff <= 0:
            raise ValueError("the encoder needs positive integral coefficients")
        CyclicWord(loop.word)  # checks cyclic reduction
        rank = max([rank] + [abs(x) for x in loop.word])
        loops.append(loop)
    return tuple(loops), rank


def build_encoding(c) -> SclProblem:
    """Enumerate positions, rectangles, vertical sides and corner arcs.

    ``c`` is a positive integral :class:`Chain` or a sequence of
    ``(letters, coeff[, tag])`` loops; loops need not be distinct or
    canonical, so ``a + A`` can be encoded as two separate loops.
    """
    loops, rank = _as_loops(c)
    total = [0] * max(rank, 1)
    for loop in loops:
        for k, e in enumerate(abelianize(loop.word, rank)):
            total[k] += loop.coeff * e
    if any(total):
        raise NotNullHomologous("chain is not null-homologous")

    positions, letters, next_pos = [], [], []
    for i, loop in enumerate(loops):
        base = len(positions)
        n = len(loop.word)
        for j, x in enumerate(loop.word):
            positions.append((i, j))
            letters.append(x)
            next_pos.append(base + (j + 1) % n)
    rects = [(p, q) for p in range(len(positions)) for q in range(p + 1, len(positions))
             if letters[p] == -letters[q]]
    node_after, node_before = [], []
    for p, q in rects:
        node_after += [p, q]
        node_before += [q, p]
    by_before: dict[int, list[int]] = {}
    for v, b in enumerate(node_before):
        by_before.setdefault(b, []).append(v)
    arcs, out_arcs = [], []
    for u, a in enumerate(node_after):
        targets = by_before.get(next_pos[a], [])
        out_arcs.append(targets)
        for v in targets:
            if u == v:
                raise AssertionError("self-loop corner: input words are not cyclically reduced")
            arcs.append((u, v))
    return SclProblem(loops, positions, letters, next_pos, rects, node_after, node_before,
                      arcs, out_arcs, rank)


# ------------------------------------------------------------------ pricing

def _split_walk(walk: list[int]) -> list[list[int]]:
    """Decompose a closed walk (list of nodes, last arc back to start) into simple cycles."""
    cycles, stack, seen = [], [], {}
    for v in walk + walk[:1]:
        if v in seen:
            k = seen[v]
            cyc = stack[k:]
            cycles.append(cyc)
            for w in cyc:
                del seen[w]
            del stack[k:]
        seen[v] = len(stack)
        stack.append(v)
    return [c for c in cycles if c]


def _canonical_cycle(cyc: Sequence[int]) -> tuple[int, ...]:
    k = cyc.index(min(cyc))
    return tuple(cyc[k:]) + tuple(cyc[:k])


def _positive_cycle(out_arcs: list[list[int]], w: list[int]) -> list[int] | None:
    """Bellman-Ford (maximizing) from a virtual source; a simple cycle of positive weight or None."""
    n = len(w)
    dist = [0] * n
    pred = [-1] * n
    last = -1
    for _ in range(n):
        last = -1
        for u in range(n):
            du = dist[u]
            for v in out_arcs[u]:
                if du + w[v] > dist[v]:
                    dist[v] = du + w[v]
                    pred[v] = u
                    last = v
        if last < 0:
            return None
    x = last
    for _ in range(n):
        x = pred[x]
    cyc = [x]
    y = pred[x]
    while y != x:
        cyc.append(y)
        y = pred[y]
    cyc.reverse()
    best = max(_split_walk(cyc), key=lambda c: sum(w[v] for v in c))
    return best if sum(w[v] for v in best) > 0 else None


def _best_cycles(out_arcs: list[list[int]], w: list[int]) -> dict[int, list[int]]:
    """Max-weight cycle through each node, assuming no positive cycle exists (Floyd-Warshall)."""
    n = len(w)
    NEG = None
    D = [[NEG] * n for _ in range(n)]
    nxt = [[-1] * n for _ in range(n)]
    for u in range(n):
        for v in out_arcs[u]:
            if D[u][v] is NEG or w[v] > D[u][v]:
                D[u][v] = w[v]
                nxt[u][v] = v
    for k in range(n):
        Dk = D[k]
        for i in range(n):
            dik = D[i][k]
            if dik is NEG:
                continue
            Di, nxti = D[i], nxt[i]
            nik = nxti[k]
            for j in range(n):
                dkj = Dk[j]
                if dkj is not NEG:
                    cand = dik + dkj
                    if Di[j] is NEG or cand > Di[j]:
                        Di[j] = cand
                        nxti[j] = nik
    out = {}
    for i in range(n):
        if D[i][i] is NEG:
            continue
        walk = [i]
        x = nxt[i][i]
        guard = 0
        while x != i and guard <= n:
            walk.append(x)
            x = nxt[x][i]
            guard += 1
        out[i] = max(_split_walk(walk), key=lambda c: sum(w[v] for v in c))
    return out


class CyclePricer:
    """Exact pricing of polygon columns for :func:`solve_scl`."""

    def __init__(self, problem: SclProblem, max_columns: int = 8):
        self.problem = problem
        self.npos = len(problem.positions)
        self.known: set[tuple[int, ...]] = set()
        self.max_columns = max_columns

    def column(self, cyc: Sequence[int]) -> exact.Column:
        return exact.Column(-HALF, {self.npos + v: Fraction(1) for v in cyc}, tag=_canonical_cycle(cyc))

    def node_weights(self, duals: list[Fraction]) -> tuple[list[int], int]:
        u = duals[self.npos:]
        scale = exact.lcm_of_denominators(u)
        return [int(x * scale) for x in u], scale

    def improving_cycles(self, duals: list[Fraction], phase_one: bool) -> list[list[int]]:
        """Cycles with dual weight above the threshold (0 in phase one, -1/2 after)."""
        w, scale = self.node_weights(duals)
        out_arcs = self.problem.out_arcs
        cyc = _positive_cycle(out_arcs, w)
        if cyc is not None:
            return [cyc]
        if phase_one:
            return []
        found = []
        for cyc in _best_cycles(out_arcs, w).values():
            if 2 * sum(w[v] for v in cyc) > -scale:
                found.append(cyc)
        found.sort(key=lambda c: (-sum(w[v] for v in c), _canonical_cycle(c)))
        return found

    def __call__(self, duals: list[Fraction], phase_one: bool) -> list[exact.Column]:
        cols = []
        for cyc in self.improving_cycles(duals, phase_one):
            key = _canonical_cycle(cyc)
            if key in self.known:
                continue
            self.known.add(key)
            cols.append(self.column(cyc))
            if len(cols) >= self.max_columns:
                break
        return cols


# ------------------------------------------------------------------- solving

@dataclass
class SclResult:
    """Optimal normal-form data for an integral positive chain.

    ``value`` is scl of the encoded chain.  ``rect_weights`` and ``cycles``
    are the degree-one optimum; ``extremal_rects``/``extremal_cycles`` are
    the same solution scaled by ``degree`` to integers.
    """

    value: Fraction
    rect_weights: list[Fraction]
    cycles: list[tuple[tuple[int, ...], Fraction]]
    dual: list[Fraction]
    degree: int
    extremal_rects: list[int]
    extremal_cycles: list[tuple[tuple[int, ...], int]]
    problem: SclProblem = field(repr=False)
    lp: exact.LinearProgram = field(repr=False)
    solution: exact.LpSolution = field(repr=False)

    @property
    def dual_value(self) -> Fraction:
        return sum((self.dual[p] * self.problem.loops[i].coeff
                    for p, (i, _) in enumerate(self.problem.positions)), Fraction(0))

    @property
    def chi(self) -> int:
        """Euler characteristic of the extremal surface."""
        return sum(t for _, t in self.extremal_cycles) - sum(self.extremal_rects)


def scl_program(problem: SclProblem) -> exact.LinearProgram:
    R = len(problem.rectangles)
    lp = exact.LinearProgram([HALF] * R)
    cover: list[dict[int, int]] = [dict() for _ in problem.positions]
    for r, (p, q) in enumerate(problem.rectangles):
        cover[p][r] = 1
        cover[q][r] = 1
    for p, (i, _) in enumerate(problem.positions):
        lp.add(cover[p], "=", problem.loops[i].coeff)
    for v in range(2 * R):
        lp.add({v // 2: -1}, "=", 0)
    return lp


def solve_scl(problem: SclProblem, max_columns: int = 8) -> SclResult:
    lp = scl_program(problem)
    pricer = CyclePricer(problem, max_columns)
    sol = exact.solve_lp(lp, pricer)
    if sol.status != "optimal":
        raise AssertionError(f"scl LP reported {sol.status}; the encoding is broken")
    R = len(problem.rectangles)
    x = sol.primal[:R]
    cycles = [(col.tag, t) for col, t in zip(sol.columns, sol.primal[R:]) if t]
    n = exact.lcm_of_denominators(list(x) + [t for _, t in cycles])
    ext_x = [int(v * n) for v in x]
    ext_c = [(c, int(t * n)) for c, t in cycles]
    value = sol.value
    assert value == (sum(x) - sum(t for _, t in cycles)) / 2
    return SclResult(value, x, cycles, sol.dual, n, ext_x, ext_c, problem, lp, sol)


def verify_certificate(result: SclResult) -> bool:
    """Re-check the dual certificate from scratch.

    The duals must make every rectangle column non-improving, admit no
    polygon cycle of dual weight above ``-1/2`` and reproduce the value.
    """
    problem, y = result.problem, result.dual
    npos = len(problem.positions)
    for r, (p, q) in enumerate(problem.rectangles):
        red = HALF - y[p] - y[q] + y[npos + 2 * r] + y[npos + 2 * r + 1]
        if red < 0:
            return False
    pricer = CyclePricer(problem)
    if pricer.improving_cycles(y, phase_one=False):
        return False
    return result.dual_value == result.value


# ----------------------------------------------------------------- front end

def prepare_chain(c, alphabet: Alphabet | None = None) -> tuple[Chain, int]:
    """Canonical positive chain with denominators cleared, and the factor used."""
    if isinstance(c, str):
        alphabet = alphabet or _infer_alphabet(c)
        c = parse_chain(c, alphabet)
    c = chain_inverse_normalize(c)
    D = exact.lcm_of_denominators(t for _, t in c.items())
    return D * c, D


def _infer_alphabet(text: str) -> Alphabet:
    letters = sorted({ch.lower() for ch in text if ch.isalpha()})
    if not letters:
        return Alphabet.of_rank(1)
    return Alphabet.of_rank(ord(letters[-1]) - ord("a") + 1)


@dataclass
class ChainScl:
    chain: Chain
    scale: int
    value: Fraction | float
    result: SclResult | None


def scl_full(c, alphabet: Alphabet | None = None) -> ChainScl:
    chain, D = prepare_chain(c, alphabet)
    if not is_null_homologous(chain):
        return ChainScl(chain, D, math.inf, None)
    if not len(chain):
        return ChainScl(chain, D, Fraction(0), None)
    res = solve_scl(build_encoding(chain))
    return ChainScl(chain, D, res.value / D, res)


def scl(c, alphabet: Alphabet | None = None) -> Fraction | float:
    """Stable commutator length of a chain; ``math.inf`` if it is not a boundary.

    ``c`` is a :class:`Chain` or an expression such as ``"abAB + 1/2*bb - aB"``.
    """
    return scl_full(c, alphabet).value


def fill_norm(c, alphabet: Alphabet | None = None) -> Fraction | float:
    return 4 * scl(c, alphabet)


def scl_on_subspace(chains: Sequence[Chain], coeffs: Sequence) -> Fraction | float:
    if len(chains) != len(coeffs):
        raise ValueError("one coefficient per chain")
    if not chains:
        return Fraction(0)
    alphabet = chains[0].alphabet
    total = Chain(alphabet)
    for ch, t in zip(chains, coeffs):
        total = total + Fraction(t) * ch
    return scl(total)
