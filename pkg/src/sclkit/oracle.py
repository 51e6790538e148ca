"""Brute-force upper bounds for scl by enumerating letter pairings.

For a fixed degree ``n`` we take ``n * c_i`` formal copies of each word,
choose how those copies are strung together into boundary circles, and pair
every letter with an inverse letter.  Each pairing is a surface: the pairs
are its rectangles and the cycles of the corner permutation are its
polygons.  This module deliberately does not reuse the LP encoder.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .words import Chain, abelianize, chain_inverse_normalize

log = logging.getLogger(__name__)


class LimitExceeded(RuntimeError):
    pass


@dataclass
class OracleResult:
    bound: Fraction | None
    pairing: dict[int, int] | None
    degree: int
    examined: int
    rectangles: int = 0
    polygons: int = 0
    boundary: tuple = ()
    layout: list[tuple[int, int, int]] = field(default_factory=list, repr=False)
    successor: list[int] = field(default_factory=list, repr=False)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _loops_of(c) -> list[tuple[tuple[int, ...], int]]:
    if isinstance(c, Chain):
        c = chain_inverse_normalize(c)
        if not c.is_integral():
            raise ValueError("the oracle needs integral coefficients")
        return [(tuple(w), int(t)) for w, t in c.items()]
    loops = [(tuple(w), int(t)) for w, t in c]
    if any(t <= 0 for _, t in loops):
        raise ValueError("the oracle needs positive coefficients")
    return loops


def oracle_scl(c, degree: int, limit: int = 10 ** 7) -> OracleResult:
    """Minimum of ``(#rectangles - #polygons) / (2 n)`` over all pairings at degree ``n``."""
    loops = _loops_of(c)
    rank = max((abs(x) for w, _ in loops for x in w), default=1)
    total = [0] * rank
    for w, t in loops:
        for k, e in enumerate(abelianize(w, rank)):
            total[k] += t * e
    if any(total):
        raise ValueError("chain is not null-homologous")

    # every copy of every word, letter by letter
    layout: list[tuple[int, int, int]] = []  # (loop, copy, letter index)
    letters: list[int] = []
    copies_of: list[list[int]] = []  # loop -> start position of each copy
    for i, (w, t) in enumerate(loops):
        starts = []
        for k in range(degree * t):
            starts.append(len(layout))
            for j, x in enumerate(w):
                layout.append((i, k, j))
                letters.append(x)
        copies_of.append(starts)
    npos = len(letters)

    best: OracleResult = OracleResult(None, None, degree, 0)
    examined = 0
    shapes = [list(_partitions(len(starts))) for starts in copies_of]
    for shape in itertools.product(*shapes):
        succ = list(range(1, npos + 1))
        boundary = []
        for i, (w, _) in enumerate(loops):
            starts = copies_of[i]
            k = 0
            for part in shape[i]:
                group = starts[k:k + part]
                k += part
                boundary.append((i, part))
                for a, s in enumerate(group):
                    last = s + len(w) - 1
                    succ[last] = group[(a + 1) % part]
        for sigma in _pairings(letters):
            examined += 1
            if examined > limit:
                raise LimitExceeded(f"more than {limit} pairings")
            polys = _count_cycles(sigma, succ)
            rects = npos // 2
            bound = Fraction(rects - polys, 2 * degree)
            if best.bound is None or bound < best.bound:
                best = OracleResult(bound, dict(enumerate(sigma)), degree, 0, rects, polys,
                                    tuple(boundary), layout, list(succ))
    best.examined = examined
    return best


def _pairings(letters: Sequence[int]) -> Iterator[list[int]]:
    """Every fixed-point-free involution pairing each letter with an inverse letter."""
    n = len(letters)
    sigma = [-1] * n

    def rec(start: int):
        p = start
        while p < n and sigma[p] >= 0:
            p += 1
        if p == n:
            yield list(sigma)
            return
        want = -letters[p]
        for q in range(p + 1, n):
            if sigma[q] < 0 and letters[q] == want:
                sigma[p], sigma[q] = q, p
                yield from rec(p + 1)
                sigma[p] = sigma[q] = -1

    yield from rec(0)


def _count_cycles(sigma: Sequence[int], succ: Sequence[int]) -> int:
    # the side leaving letter p is followed by the side entering succ(p),
    # which belongs to the rectangle pairing succ(p) with sigma(succ(p))
    n = len(sigma)
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = sigma[succ[p]]
    return count


def corner_data(result: OracleResult) -> tuple[list[tuple[int, int]], list[tuple[int, ...]]]:
    """Rectangles and polygon cycles of the best pairing, in oracle position ids.

    A vertical side is identified with the position whose letter it follows.
    """
    sigma = result.pairing
    n = len(sigma)
    rects = sorted({(min(p, q), max(p, q)) for p, q in sigma.items()})
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        p = start
        while not seen[p]:
            seen[p] = True
            cyc.append(p)
            p = sigma[result.successor[p]]
        cycles.append(tuple(cyc))
    return rects, cycles


@dataclass
class CorpusRow:
    chain: object
    lp: Fraction
    bounds: dict[int, Fraction]

    @property
    def dominated(self) -> bool:
        return all(b >= self.lp for b in self.bounds.values())

    @property
    def attained(self) -> bool:
        return any(b == self.lp for b in self.bounds.values())


@dataclass
class CorpusReport:
    rows: list[CorpusRow]

    @property
    def ok(self) -> bool:
        return all(r.dominated for r in self.rows)

    @property
    def equal(self) -> list[CorpusRow]:
        return [r for r in self.rows if r.attained]

    def render(self, alphabet=None) -> str:
        lines = []
        for r in self.rows:
            name = r.chain.render() if isinstance(r.chain, Chain) else str(r.chain)
            bounds = ", ".join(f"n={n}: {b}" for n, b in sorted(r.bounds.items()))
            flag = "=" if r.attained else ("<" if r.dominated else "VIOLATION")
            lines.append(f"{name:>20}  lp={r.lp}  {bounds}  {flag}")
        lines.append(f"{len(self.rows)} chains, {len(self.equal)} attained, "
                     f"{'no violations' if self.ok else 'VIOLATIONS'}")
        return "\n".join(lines)


def corpus_check(chains: Iterable, n_max: int = 2, limit: int = 10 ** 7) -> CorpusReport:
    """Compare LP values with oracle bounds at every degree up to ``n_max``."""
    from .scl_engine import build_encoding, scl, solve_scl

    rows = []
    for c in chains:
        value = scl(c) if isinstance(c, Chain) else solve_scl(build_encoding(c)).value
        bounds = {n: oracle_scl(c, n, limit).bound for n in range(1, n_max + 1)}
        rows.append(CorpusRow(c, value, bounds))
    return CorpusReport(rows)


def null_homologous_words(max_length: int, rank: int = 2) -> list[tuple[int, ...]]:
    """Canonical representatives of every null-homologous cyclically reduced word up to ``max_length``."""
    from .words import CyclicWord

    alphabet = [g for k in range(1, rank + 1) for g in (k, -k)]
    found = set()
    for length in range(2, max_length + 1):
        for w in itertools.product(alphabet, repeat=length):
            if any(w[k] == -w[(k + 1) % length] for k in range(length)):
                continue
            if any(abelianize(w, rank)):
                continue
            found.add(tuple(CyclicWord(w)))
    return sorted(found, key=lambda w: (len(w), [(abs(x), x < 0) for x in w]))


def random_chain(rng, rank: int = 2, terms: int = 2, max_length: int = 4, max_letters: int = 12):
    """A random null-homologous chain, balanced by one extra term if needed.

    ``rng`` is a :class:`random.Random`; equal seeds give equal chains.
    Draws are repeated until the chain has at most ``max_letters`` letters
    counted without multiplicity; raises ValueError if the bound is never met.
    """
    for _ in range(10_000):
        c = _random_chain_once(rng, rank, terms, max_length)
        if len(c) and sum(len(w) for w in c) <= max_letters:
            return c
    raise ValueError(f"no chain with at most {max_letters} letters after 10000 draws")


def _random_chain_once(rng, rank, terms, max_length):
    from .words import Alphabet, canonicalize_terms

    letters = [g for k in range(1, rank + 1) for g in (k, -k)]

    def word(length: int) -> tuple[int, ...]:
        while True:
            w = [rng.choice(letters)]
            while len(w) < length:
                x = rng.choice(letters)
                if x != -w[-1]:
                    w.append(x)
            if w[0] != -w[-1] or length == 1:
                return tuple(w)

    raw = [(word(rng.randint(1, max_length)), rng.randint(1, 3)) for _ in range(terms)]
    total = [0] * rank
    for w, t in raw:
        for k, e in enumerate(abelianize(w, rank)):
            total[k] += t * e
    fix = []
    for k, e in enumerate(total):
        fix += [-(k + 1) if e > 0 else k + 1] * abs(e)
    if fix:
        raw.append((tuple(fix), 1))
    return canonicalize_terms(raw, Alphabet.of_rank(rank))
