from fractions import Fraction

from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from bicovariant.linalg import PRIMES, Echelon, rank, solve, spans_equal


def dense_rank(rows, ncols):
    """Textbook Gaussian elimination over Fractions (oracle)."""
    m = [[Fraction(r.get(j, 0)) for j in range(ncols)] for r in rows]
    rk, col = 0, 0
    while rk < len(m) and col < ncols:
        piv = next((i for i in range(rk, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][col]:
                f = m[i][col] / m[rk][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
        col += 1
    return rk


matrices = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.dictionaries(st.integers(0, n - 1), st.integers(-3, 3), max_size=n), max_size=8).map(
        lambda rows: (rows, n)
    )
)


@given(matrices)
def test_rank_matches_dense_oracle(m):
    rows, n = m
    r = dense_rank(rows, n)
    assert rank(rows) == r
    for p in PRIMES:
        assert rank(rows, p) == r


@given(matrices)
def test_reduce_kills_members(m):
    rows, n = m
    e = Echelon().extend(rows)
    for r in rows:
        assert e.contains(r)
    assert e.rank <= min(len(rows), n)


def test_spans_equal_reports_ranks():
    a = [{0: 1, 1: 1}, {1: 1}]
    b = [{0: 1}, {0: 2, 1: 3}]
    assert spans_equal(a, b) == (True, 2, 2, 2)
    assert spans_equal(a, [{0: 1}])[0] is False


def test_solve_particular_and_nullspace():
    rows = [{"x": 1, "y": 1}, {"y": 1, "z": -1}]
    sol, null = solve(rows, [3, 1], ["x", "y", "z"])
    assert sol is not None and len(null) == 1
    for r, b in zip(rows, [3, 1]):
        assert sum(v * sol.get(k, 0) for k, v in r.items()) == b
        assert sum(v * null[0].get(k, 0) for k, v in r.items()) == 0


def test_solve_inconsistent():
    sol, _ = solve([{"x": 1}, {"x": 2}], [1, 3], ["x"])
    assert sol is None


def test_exact_values_stay_rational():
    e = Echelon()
    e.add({0: mpq(1, 3), 1: mpq(2, 3)})
    row = next(iter(e.rows()))
    assert row[0] == 1 and row[1] == 2
