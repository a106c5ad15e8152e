import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twocenter.combinatorics import BinomialTable, binomial, e_floor, gen_binomial


def pascal_oracle(n):
    row = [1]
    for _ in range(n):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
    return row


@pytest.mark.parametrize("n, want", [(4, 2), (5, 2), (0, 0), (1, 0), (7, 3)])
def test_e_floor(n, want):
    assert e_floor(n) == want


def test_e_floor_rejects_negative():
    with pytest.raises(ValueError):
        e_floor(-1)


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(7, 9) == 0
    assert binomial(7, -1) == 0
    assert binomial(30, 15) == pascal_oracle(30)[15] == 155117520


def test_binomial_matches_factorials():
    for n in range(41):
        for k in range(n + 1):
            assert binomial(n, k) == math.factorial(n) // (math.factorial(k) * math.factorial(n - k))


def test_large_binomial_is_exact():
    assert binomial(200, 100) == pascal_oracle(200)[100]


def test_table_invariants():
    table = BinomialTable(25)
    for n in range(26):
        assert table(n, 0) == table(n, n) == 1
        for k in range(n + 1):
            assert table(n, k) == table(n, n - k)
        for k in range(1, n):
            assert table(n, k) == table(n - 1, k - 1) + table(n - 1, k)


def test_table_grows_on_demand():
    table = BinomialTable(2)
    assert table.max_n == 2
    assert table(10, 5) == 252
    assert table.max_n == 10


def test_gen_binomial_examples():
    for N in range(8):
        for m in range(-1, N + 3):
            assert gen_binomial(m, N, 0) == binomial(N, m)
    # (mu+nu)^2 (mu-nu) = mu^3 + mu^2 nu - mu nu^2 - nu^3
    assert [gen_binomial(m, 2, 1) for m in range(4)] == [1, 1, -1, -1]
    assert gen_binomial(2, 2, 1) == -1
    assert gen_binomial(0, 5, 3) == 1
    assert [gen_binomial(m, 1, 1) for m in range(3)] == [1, 0, -1]


small = st.integers(min_value=0, max_value=12)


@given(small, small, st.fractions(max_denominator=50).filter(lambda x: abs(x) < 50))
def test_generating_function(N, Np, x):
    lhs = sum(gen_binomial(m, N, Np) * x**m for m in range(N + Np + 1))
    assert lhs == (1 + x) ** N * (1 - x) ** Np


@given(small, small)
def test_coefficient_sum(N, Np):
    total = sum(gen_binomial(m, N, Np) for m in range(N + Np + 1))
    assert total == (2**N if Np == 0 else 0)


@given(small, small, st.integers(min_value=-2, max_value=26))
def test_antisymmetry(N, Np, m):
    assert gen_binomial(m, N, Np) == (-1) ** (m % 2) * gen_binomial(m, Np, N)
