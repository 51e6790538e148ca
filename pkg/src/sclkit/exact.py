"""Exact rational linear algebra and a revised simplex solver.

Rationals are :class:`fractions.Fraction`; integer matrices are lists of
lists of ``int``.  Nothing in here touches floating point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

try:  # gmpy2's mpq is a drop-in exact rational, several times faster than Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

log = logging.getLogger(__name__)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))

Rational = Fraction
IntMatrix = list[list[int]]


# ---------------------------------------------------------------- lattices

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ m == H``.  ``H`` is in
    row echelon form, pivots are positive and entries above a pivot lie in
    ``[0, pivot)``.  Zero rows are at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    H = [list(map(int, r)) for r in m]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            for M in (H, U):
                ri, rr = M[i], M[r]
                M[r] = [s * x + t * y for x, y in zip(rr, ri)]
                M[i] = [-q * x + p * y for x, y in zip(rr, ri)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [x - f * y for x, y in zip(H[i], H[r])]
                U[i] = [x - f * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    for x in v:
        if x:
            return v if x > 0 else [-y for y in v]
    return v


def kernel_lattice_basis(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A basis of the integer lattice ``{v in Z^n : m v = 0}``.

    Vectors are primitive with a positive leading entry; there are exactly
    ``n - rank(m)`` of them.
    """
    n = len(m[0]) if m else (ncols or 0)
    if not m:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    transpose = [[int(m[i][j]) for i in range(len(m))] for j in range(n)]
    H, U = hermite_normal_form(transpose)
    basis = [U[i] for i in range(n) if not any(H[i])]
    if not basis:
        return []
    # HNF of the basis is a canonical basis of the same (saturated) lattice
    Hk, _ = hermite_normal_form(basis)
    return [_primitive(r) for r in Hk if any(r)]


def matrix_rank(m: Sequence[Sequence[int | Fraction]]) -> int:
    rows = [[Fraction(x) for x in r] for r in m]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c] / rows[rank][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def determinant(m: Sequence[Sequence[int | Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def solve_mod_n(m: Sequence[Sequence[int]], b: Sequence[int], N: int) -> list[int] | None:
    """Find ``x`` with ``m x = b (mod N)``, or return None if there is none.

    Row reduction over Z/N with unimodular 2x2 steps; after each pivot the
    annihilator multiple of the pivot row is fed back in (Howell form), which
    is what makes plain back substitution sound over a ring with zero
    divisors.
    """
    if N < 1:
        raise ValueError("modulus must be positive")
    n = len(m[0]) if m else 0
    rows = [[x % N for x in r] + [bi % N] for r, bi in zip(m, b)]
    if len(rows) != len(m):
        raise ValueError("dimension mismatch")
    pivots: list[tuple[int, list[int]]] = []
    pending = rows
    for c in range(n):
        pending = [r for r in pending if any(r)]
        live = [r for r in pending if r[c]]
        rest = [r for r in pending if not r[c]]
        if not live:
            continue
        top = live[0]
        for other in live[1:]:
            g, s, t = _xgcd(top[c], other[c])
            p, q = top[c] // g, other[c] // g
            new_top = [(s * x + t * y) % N for x, y in zip(top, other)]
            new_other = [(-q * x + p * y) % N for x, y in zip(top, other)]
            top = new_top
            rest.append(new_other)
        g = gcd(top[c], N)
        ann = [(N // g) * x % N for x in top]
        rest.append(ann)
        pivots.append((c, top))
        pending = rest
    for r in pending:
        if any(x % N for x in r[:n]):
            raise AssertionError("unreduced row left after elimination")
        if r[n] % N:
            return None
    x = [0] * n
    for c, row in reversed(pivots):
        rhs = (row[n] - sum(row[k] * x[k] for k in range(c + 1, n))) % N
        a = row[c] % N
        g = gcd(a, N)
        if rhs % g:
            return None
        mod = N // g
        x[c] = (rhs // g) * pow(a // g, -1, mod) % mod if mod > 1 else 0
    assert all((sum(r[k] * x[k] for k in range(n)) - bi) % N == 0 for r, bi in zip(m, b))
    return x


def nullspace_mod_p(m: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of the right nullspace of ``m`` over the prime field ``F_p``."""
    n = len(m[0]) if m else (ncols or 0)
    rows = [[x % p for x in r] for r in m]
    pivcols: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
    free = [c for c in range(n) if c not in set(pivcols)]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = -rows[i][fc] % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------- simplex

@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, Fraction]
    relation: str  # "=", "<=", ">="
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in ("=", "<=", ">="):
            raise ValueError(f"bad relation {self.relation!r}")


@dataclass
class LinearProgram:
    """``min``/``max`` of ``objective . x`` subject to sparse constraints.

    Every variable is ``>= 0`` unless listed in ``free``.
    """

    objective: list[Fraction]
    constraints: list[Constraint] = field(default_factory=list)
    sense: str = "min"
    free: frozenset[int] = frozenset()

    @property
    def ncols(self) -> int:
        return len(self.objective)

    def add(self, coeffs: Mapping[int, int | Fraction], relation: str, rhs) -> int:
        for j in coeffs:
            if not 0 <= j < self.ncols:
                raise ValueError(f"column {j} out of range")
        self.constraints.append(Constraint(
            {j: Fraction(v) for j, v in coeffs.items() if v}, relation, Fraction(rhs)))
        return len(self.constraints) - 1


@dataclass(frozen=True)
class Column:
    """A generated column: objective coefficient and sparse constraint entries."""

    cost: Fraction
    entries: Mapping[int, Fraction]
    tag: object = None


@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    primal: list[Fraction] = field(default_factory=list)
    dual: list[Fraction] = field(default_factory=list)
    basis: tuple[int, ...] = ()
    columns: list[Column] = field(default_factory=list)
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


Pricer = Callable[[list[Fraction], bool], Iterable[Column]]


class _Simplex:
    """Revised simplex on ``min c x, A x = b, x >= 0`` with ``b >= 0``.

    The basis inverse is kept as a dense exact matrix and updated by
    product-form pivots.  Entering and leaving variables follow Bland's rule.
    """

    def __init__(self, cols: list[dict[int, Fraction]], cost: list[Fraction], b: list[Fraction], basis: list[int]):
        self.cols = cols
        self.cost = cost
        self.b = b
        self.m = len(b)
        self.basis = basis
        self.Binv = [[_Q(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        self.xB = list(b)
        self.pivots = 0
        self.blocked: set[int] = set()

    def column(self, j: int) -> list[Fraction]:
        col = list(self.cols[j].items())
        out = []
        for row in self.Binv:
            acc = 0
            for i, v in col:
                if row[i]:
                    acc += row[i] * v
            out.append(_Q(acc))
        return out

    def duals(self, cost: list[Fraction]) -> list[Fraction]:
        y = [_Q(0)] * self.m
        for k, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                row = self.Binv[k]
                for i in range(self.m):
                    if row[i]:
                        y[i] += cb * row[i]
        return y

    def reduced(self, j: int, cost: list[Fraction], y: list[Fraction]) -> Fraction:
        return cost[j] - sum((y[i] * v for i, v in self.cols[j].items()), _Q(0))

    def pivot(self, enter: int, leave_row: int, d: list[Fraction]):
        piv = d[leave_row]
        rowp = [x / piv if x else x for x in self.Binv[leave_row]]
        support = [k for k, x in enumerate(rowp) if x]
        xp = self.xB[leave_row] / piv
        for i in range(self.m):
            if i == leave_row or not d[i]:
                continue
            f = d[i]
            row = self.Binv[i]
            for k in support:
                row[k] -= f * rowp[k]
            if xp:
                self.xB[i] -= f * xp
        self.Binv[leave_row] = rowp
        self.xB[leave_row] = xp
        self.basis[leave_row] = enter
        self.pivots += 1

    def run(self, cost: list[Fraction], pricer: Callable[[list[Fraction]], Iterable[Column]] | None,
            add_column: Callable[[Column], int] | None, max_pivots: int | None) -> str:
        while True:
            y = self.duals(cost)
            inbasis = set(self.basis)
            enter = None
            for j in range(len(self.cols)):
                if j in inbasis or j in self.blocked:
                    continue
                if self.reduced(j, cost, y) < 0:
                    enter = j
                    break
            if enter is None and pricer is not None:
                for col in pricer(y):
                    j = add_column(col)
                    if self.reduced(j, cost, y) < 0 and enter is None:
                        enter = j
            if enter is None:
                return "optimal"
            d = self.column(enter)
            leave = None
            best = None
            for i in range(self.m):
                if self.basis[i] in self.blocked and d[i] != 0:
                    # a zero artificial left in the basis leaves first
                    if best is None or best > 0 or self.basis[i] < self.basis[leave]:
                        best, leave = _Q(0), i
                elif d[i] > 0:
                    ratio = self.xB[i] / d[i]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            self.pivot(enter, leave, d)
            if max_pivots is not None and self.pivots > max_pivots:
                raise RuntimeError("pivot limit exceeded")


def solve_lp(p: LinearProgram, pricer: Pricer | None = None, max_pivots: int | None = None) -> LpSolution:
    """Solve ``p`` exactly.

    ``pricer(duals, phase_one)`` is an optional column generator.  It is
    called whenever no existing column prices out, receives the current dual
    vector (one entry per constraint of ``p``) and returns new columns.  A
    column improves when ``cost - duals . entries`` is negative for a ``min``
    problem (positive for ``max``).  In phase one the problem is a ``min``
    and every column costs zero.  The solver stops once the pricer offers
    nothing improving.
    """
    maximize = p.sense == "max"
    if p.sense not in ("min", "max"):
        raise ValueError(f"bad sense {p.sense!r}")
    n0 = p.ncols
    m = len(p.constraints)

    # structural columns: x_j (or x_j^+ and x_j^- for free variables)
    cols: list[dict[int, Fraction]] = []
    cost: list[Fraction] = []
    origin: list[tuple[int, int]] = []  # (original var, sign)
    rowsign = [1] * m
    for i, con in enumerate(p.constraints):
        if con.rhs < 0:
            rowsign[i] = -1

    def push(entries: Mapping[int, Fraction], c: Fraction, org: tuple[int, int]) -> int:
        cols.append({i: _Q(rowsign[i] * v) for i, v in entries.items() if v})
        cost.append(_Q(-c if maximize else c))
        origin.append(org)
        return len(cols) - 1

    by_col: list[dict[int, Fraction]] = [dict() for _ in range(n0)]
    for i, con in enumerate(p.constraints):
        for j, v in con.coeffs.items():
            by_col[j][i] = v
    for j in range(n0):
        push(by_col[j], Fraction(p.objective[j]), (j, 1))
        if j in p.free:
            push({i: -v for i, v in by_col[j].items()}, -Fraction(p.objective[j]), (j, -1))
    for i, con in enumerate(p.constraints):
        if con.relation == "<=":
            push({i: Fraction(1)}, Fraction(0), (-1, 0))
        elif con.relation == ">=":
            push({i: Fraction(-1)}, Fraction(0), (-1, 0))
    b = [_Q(rowsign[i] * p.constraints[i].rhs) for i in range(m)]

    generated: list[Column] = []
    gen_index: dict[int, int] = {}

    art_start = len(cols)
    for i in range(m):
        push({i: Fraction(rowsign[i])}, Fraction(0), (-2, 0))
    nart = m
    cost1 = [_Q(0)] * len(cols)
    for k in range(nart):
        cost1[art_start + k] = _Q(1)

    sx = _Simplex(cols, cost, b, list(range(art_start, art_start + m)))

    def dual_to_original(y) -> list[Fraction]:
        return [rowsign[i] * _frac(y[i]) for i in range(m)]

    phase = {"one": True}

    def add_column(col: Column) -> int:
        j = push(dict(col.entries), Fraction(col.cost), (-3, len(generated)))
        gen_index[j] = len(generated)
        generated.append(col)
        cost1.append(_Q(0))
        return j

    def wrapped_pricer(y):
        y = dual_to_original(y)
        if maximize and not phase["one"]:
            y = [-v for v in y]
        return list(pricer(y, phase["one"]))

    status = sx.run(cost1, wrapped_pricer if pricer else None, add_column, max_pivots)
    assert status == "optimal"
    infeas = sum((sx.xB[k] for k, j in enumerate(sx.basis) if art_start <= j < art_start + nart), _Q(0))
    if infeas > 0:
        return LpSolution("infeasible", pivots=sx.pivots, columns=generated)

    # drive zero artificials out of the basis where possible
    is_art = lambda j: art_start <= j < art_start + nart
    for k in range(m):
        if is_art(sx.basis[k]):
            inbasis = set(sx.basis)
            for j in range(len(cols)):
                if is_art(j) or j in inbasis:
                    continue
                d = sx.column(j)
                if d[k] != 0:
                    sx.pivot(j, k, d)
                    break
    sx.blocked = set(range(art_start, art_start + nart))
    phase["one"] = False
    while len(cost) < len(cols):
        cost.append(_Q(0))
    status = sx.run(cost, wrapped_pricer if pricer else None, add_column, max_pivots)
    if status == "unbounded":
        return LpSolution("unbounded", pivots=sx.pivots, columns=generated)

    values = [Fraction(0)] * len(cols)
    for k, j in enumerate(sx.basis):
        values[j] = _frac(sx.xB[k])
    primal = [Fraction(0)] * (n0 + len(generated))
    for j in range(len(cols)):
        var, sign = origin[j]
        if var >= 0:
            primal[var] += sign * values[j]
        elif var == -3:
            primal[n0 + gen_index[j]] = values[j]
    y = sx.duals(cost)
    dual = dual_to_original(y)
    if maximize:
        dual = [-v for v in dual]
    value = sum((Fraction(p.objective[j]) * primal[j] for j in range(n0)), Fraction(0))
    value += sum((Fraction(c.cost) * primal[n0 + k] for k, c in enumerate(generated)), Fraction(0))
    basis = tuple(sorted(j for j in sx.basis if not is_art(j)))
    return LpSolution("optimal", value, primal, dual, basis, generated, sx.pivots)


def check_certificate(p: LinearProgram, sol: LpSolution) -> bool:
    """Verify primal feasibility, dual feasibility and equal objectives exactly.

    Generated columns (``sol.columns``) are treated as extra variables ``>= 0``.
    Dual feasibility of columns the pricer never produced is the pricer's
    responsibility.
    """
    if not sol.optimal:
        return False
    n0 = p.ncols
    sgn = 1 if p.sense == "min" else -1
    y = sol.dual
    for i, con in enumerate(p.constraints):
        lhs = sum((v * sol.primal[j] for j, v in con.coeffs.items()), Fraction(0))
        lhs += sum((col.entries.get(i, 0) * sol.primal[n0 + k] for k, col in enumerate(sol.columns)), Fraction(0))
        if con.relation == "=" and lhs != con.rhs:
            return False
        if con.relation == "<=" and (lhs > con.rhs or sgn * y[i] > 0):
            return False
        if con.relation == ">=" and (lhs < con.rhs or sgn * y[i] < 0):
            return False
    for j in range(n0):
        if j not in p.free and sol.primal[j] < 0:
            return False
    cols: list[tuple[Fraction, Mapping[int, Fraction], bool, Fraction]] = []
    by_col: list[dict[int, Fraction]] = [dict() for _ in range(n0)]
    for i, con in enumerate(p.constraints):
        for j, v in con.coeffs.items():
            by_col[j][i] = v
    for j in range(n0):
        cols.append((Fraction(p.objective[j]), by_col[j], j in p.free, sol.primal[j]))
    for k, col in enumerate(sol.columns):
        if sol.primal[n0 + k] < 0:
            return False
        cols.append((Fraction(col.cost), col.entries, False, sol.primal[n0 + k]))
    for c, entries, free, xj in cols:
        red = sgn * (c - sum((y[i] * v for i, v in entries.items()), Fraction(0)))
        if red < 0 and not (free and red == 0):
            return False
        if free and red != 0:
            return False
        if xj != 0 and red != 0:
            return False  # complementary slackness
    for i, con in enumerate(p.constraints):
        lhs = sum((v * sol.primal[j] for j, v in con.coeffs.items()), Fraction(0))
        lhs += sum((col.entries.get(i, 0) * sol.primal[n0 + k] for k, col in enumerate(sol.columns)), Fraction(0))
        if y[i] != 0 and lhs != con.rhs:
            return False
    dual_value = sum((y[i] * con.rhs for i, con in enumerate(p.constraints)), Fraction(0))
    return dual_value == sol.value


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out
