import itertools
from fractions import Fraction
from math import comb, gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from sclkit import exact
from sclkit.exact import LinearProgram, solve_lp

small = st.integers(-4, 4)


def matrices(max_rows=3, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=max_rows))


def _rational_nullity(m):
    """Independent oracle: nullity by Fraction Gaussian elimination."""
    rows = [[Fraction(x) for x in r] for r in m]
    n = len(rows[0])
    rank, col = 0, 0
    for col in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return n - rank


def test_kernel_examples():
    assert exact.kernel_lattice_basis([[1, 1]]) == [[1, -1]]
    assert exact.kernel_lattice_basis([[1, 0], [0, 1]]) == []
    assert exact.kernel_lattice_basis([[2, 4], [1, 2]]) == [[2, -1]]


def test_hnf_examples():
    H, U = exact.hermite_normal_form([[2, 4], [1, 3]])
    assert H == [[1, 1], [0, 2]]
    assert abs(exact.determinant(U)) == 1
    assert exact.hermite_normal_form([[1, 0], [0, 1]])[0] == [[1, 0], [0, 1]]
    assert exact.hermite_normal_form([[0, 0]])[0] == [[0, 0]]


def test_solve_mod_n_examples():
    assert exact.solve_mod_n([[1, 1]], [0], 2) == [0, 0]
    assert exact.solve_mod_n([[2]], [1], 2) is None
    x = exact.solve_mod_n([[1, 1], [1, -1]], [1, 2], 3)
    assert x == [0, 1]


@settings(max_examples=80)
@given(matrices())
def test_kernel_properties(m):
    basis = exact.kernel_lattice_basis(m)
    assert len(basis) == _rational_nullity(m)
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in m)
        g = 0
        for x in v:
            g = gcd(g, x)
        assert g == 1


@settings(max_examples=80)
@given(matrices())
def test_hnf_properties(m):
    H, U = exact.hermite_normal_form(m)
    assert abs(exact.determinant(U)) == 1
    prod = [[sum(U[i][k] * m[k][j] for k in range(len(m))) for j in range(len(m[0]))] for i in range(len(U))]
    assert prod == H
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        assert p > last and row[p] > 0
        for above in H[:H.index(row)]:
            assert 0 <= above[p] < row[p]
        last = p


@settings(max_examples=80)
@given(st.integers(2, 6).flatmap(lambda N: st.tuples(
    st.just(N), st.lists(st.lists(st.integers(0, N - 1), min_size=2, max_size=2), min_size=1, max_size=2),
    st.lists(st.integers(0, N - 1), min_size=2, max_size=2))))
def test_solve_mod_n_brute_force(data):
    N, m, b = data
    b = b[:len(m)]
    brute = [x for x in itertools.product(range(N), repeat=2)
             if all((r[0] * x[0] + r[1] * x[1] - bi) % N == 0 for r, bi in zip(m, b))]
    x = exact.solve_mod_n(m, b, N)
    assert (x is None) == (not brute)


def test_nullspace_mod_2():
    basis = exact.nullspace_mod_p([[1, 1, 0]], 2)
    assert sorted(basis) == [[0, 0, 1], [1, 1, 0]]


def test_lp_examples():
    p = LinearProgram([1, 1], sense="max")
    p.add({0: 1}, "<=", 1)
    p.add({1: 1}, "<=", 2)
    sol = solve_lp(p)
    assert sol.status == "optimal" and sol.value == 3 and sol.primal == [1, 2]
    assert exact.check_certificate(p, sol)

    q = LinearProgram([1])
    q.add({0: 1}, "<=", -1)
    assert solve_lp(q).status == "infeasible"

    r = LinearProgram([1], sense="max")
    assert solve_lp(r).status == "unbounded"


def _brute_lp(p):
    """Independent oracle: best basic feasible point of a tiny standard-form LP."""
    n = p.ncols
    rows = [([c.coeffs.get(j, 0) for j in range(n)], c.relation, c.rhs) for c in p.constraints]
    # add slacks so every constraint is an equation
    A, b = [], []
    slack = sum(1 for _, rel, _ in rows if rel != "=")
    k = 0
    for coeffs, rel, rhs in rows:
        extra = [0] * slack
        if rel != "=":
            extra[k] = 1 if rel == "<=" else -1
            k += 1
        A.append(list(coeffs) + extra)
        b.append(rhs)
    cost = list(p.objective) + [0] * slack
    m, width = len(A), n + slack
    best = None
    for cols in itertools.combinations(range(width), m):
        sub = [[A[i][j] for j in cols] for i in range(m)]
        if exact.determinant(sub) == 0:
            continue
        # Cramer's rule
        d = exact.determinant(sub)
        x = [0] * width
        for t, j in enumerate(cols):
            mod = [row[:t] + [b[i]] + row[t + 1:] for i, row in enumerate(sub)]
            x[j] = exact.determinant(mod) / d
        if any(v < 0 for v in x):
            continue
        val = sum(c * v for c, v in zip(cost, x))
        if best is None or (val > best if p.sense == "max" else val < best):
            best = val
    return best


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(1, 6), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_lp_matches_vertex_enumeration(rows, rhs, obj):
    # bounded: sum of variables <= 6 is always added
    p = LinearProgram(obj, sense="max")
    for r, b in zip(rows, rhs):
        p.add(dict(enumerate(r)), "<=", b)
    p.add({0: 1, 1: 1, 2: 1}, "<=", 6)
    sol = solve_lp(p)
    assert sol.status == "optimal"
    assert exact.check_certificate(p, sol)
    assert sol.value == _brute_lp(p)
    m = len(p.constraints)
    assert sol.pivots <= comb(3 + 2 * m, m) * 2


def test_lcm_of_denominators():
    assert exact.lcm_of_denominators([Fraction(1, 2), Fraction(1, 3), 1]) == 6
