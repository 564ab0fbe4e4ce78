from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from yoneda.field import QQ, PrimeField, field_from_name
from yoneda.linalg import Echelon, left_kernel, rank

import oracles

small = st.integers(min_value=-3, max_value=3)


@st.composite
def sparse_rows(draw, max_rows=7, max_cols=7):
    n = draw(st.integers(0, max_rows))
    m = draw(st.integers(1, max_cols))
    rows = []
    for _ in range(n):
        vals = draw(st.lists(small, min_size=m, max_size=m))
        rows.append({j: v for j, v in enumerate(vals) if v})
    return rows


def _combine(coeffs, rows):
    out = {}
    for i, c in coeffs.items():
        for j, v in rows[i].items():
            out[j] = out.get(j, 0) + c * v
    return {j: v for j, v in out.items() if v}


@given(sparse_rows())
def test_rank_matches_oracle(rows):
    assert rank(rows) == oracles.rank(rows)


@given(sparse_rows())
def test_rank_plus_nullity(rows):
    ker = left_kernel(rows)
    assert rank(rows) + len(ker) == len(rows)
    for kv in ker:
        assert _combine(kv, rows) == {}


@given(sparse_rows())
def test_kernel_is_independent(rows):
    ker = left_kernel(rows)
    assert rank(ker) == len(ker)


@given(sparse_rows(), st.lists(small, min_size=7, max_size=7))
def test_solve_reproduces_target(rows, coeffs):
    ech = Echelon(QQ, track=True)
    for i, r in enumerate(rows):
        ech.add(r, label=i)
    target = _combine({i: c for i, c in enumerate(coeffs[:len(rows)])}, rows)
    x = ech.solve(target)
    assert x is not None
    assert _combine(x, rows) == target


@given(sparse_rows())
def test_rank_over_prime_field(rows):
    F = PrimeField(5)
    frows = [{j: F(v) for j, v in r.items()} for r in rows]
    assert rank(frows, F) == oracles.rank(rows, p=5)
    for kv in left_kernel(frows, F):
        assert all(not v for v in _combine(kv, frows).values())


def test_unsolvable_returns_none():
    ech = Echelon(QQ, track=True)
    ech.add({0: 1, 1: 1}, label=0)
    assert ech.solve({1: 1}) is None


def test_field_names():
    assert field_from_name("Q") is QQ
    assert field_from_name("F7") == PrimeField(7)
    with pytest.raises(ValueError):
        field_from_name("F8")
    with pytest.raises(ValueError):
        field_from_name("R")


@given(st.integers(1, 6), st.integers(1, 6))
def test_prime_field_inverse(a, b):
    F = PrimeField(7)
    x = F(Fraction(a, b))
    assert x * F(b) == F(a)
    assert x * F.inv(x) == F(1)


def test_rational_printing():
    assert QQ.to_str(Fraction(-3, 4)) == "-3/4"
    assert QQ.to_str(Fraction(6, 3)) == "2"
