from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gross_schoen._exact import InconsistentSystem, Poly, inverse, rank, solve_least_norm

F = Fraction
coeffs = st.lists(st.fractions(max_denominator=20), max_size=5)


@given(coeffs, coeffs, st.fractions(max_denominator=20))
def test_poly_ring_ops(a, b, t):
    p, q = Poly(a), Poly(b)
    assert (p + q)(t) == p(t) + q(t)
    assert (p * q)(t) == p(t) * q(t)
    assert p.shift(t)(F(1, 3)) == p(t + F(1, 3))


def test_poly_calculus():
    p = Poly((1, 2, 3))  # 1 + 2t + 3t²
    assert p.derivative() == Poly((2, 6))
    assert p.integrate(0, 1) == 3
    assert Poly((0, 0)).degree == -1


def test_inverse_and_rank():
    A = [[2, 1], [1, 1]]
    assert inverse(A) == [[1, -1], [-1, 2]]
    assert rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])


def test_least_norm():
    assert solve_least_norm([[1, 1]], [2]) == [1, 1]
    assert solve_least_norm([[1, 0], [0, 2]], [3, 4]) == [3, 2]
    with pytest.raises(InconsistentSystem):
        solve_least_norm([[1, 1], [1, 1]], [1, 2])
