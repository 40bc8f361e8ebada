"""The dense oracle against hand computations and the Groebner kernel."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgcm import oracle
from dgcm.algebra.field import GF
from dgcm.algebra.ring import BaseRing, polynomial_ring
from dgcm.complexes import build_complex

from instances import artinian_instance

A = polynomial_ring("x,y")
B = BaseRing(GF(5), ["x"], None, ["x^3"])


def test_field_rank():
    assert oracle.field_rank([[1, 2], [2, 4]], 0) == 1
    assert oracle.field_rank([[1, 2], [3, 4]], 0) == 2
    assert oracle.field_rank([[1, 2], [3, 1]], 5) == 1      # det = -5
    assert oracle.field_rank([[Fraction(1, 2), 1]], 0) == 1
    assert oracle.field_rank([], 0) == 0


def test_monomials():
    assert oracle.monomials([1, 1], 2) == [(0, 2), (1, 1), (2, 0)]
    assert oracle.monomials([1, 2], 3) == [(1, 1), (3, 0)]
    assert oracle.monomials([1, 1], -1) == []


def test_koszul_complex_on_x_y():
    # 0 -> A(-2) -> A(-1)^2 -> A -> 0 resolves k
    C = build_complex(A, {-2: [["-y"], ["x"]], -1: [["x", "y"]]})
    assert oracle.cohomology_profile(C, -2, 5) == {0: {0: 1}}


def test_multiplication_by_x_on_artinian_base():
    # B(-1) --x--> B: kernel x^2 B(-1) in internal degree 3, cokernel k
    C = build_complex(B, {-1: [["x"]]})
    assert oracle.cohomology_profile(C) == {-1: {3: 1}, 0: {0: 1}}
    assert oracle.total_dims(C) == {-1: 1, 0: 1}
    assert oracle.oracle_inf(C) == -1


def test_internal_range_on_artinian_base():
    C = build_complex(B, {-1: [["x"]]})
    assert list(oracle.internal_range(C)) == [0, 1, 2, 3]


def test_profile_needs_range_over_polynomial_base():
    C = build_complex(A, {-1: [["x"]]})
    with pytest.raises(ValueError):
        oracle.cohomology_profile(C)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 400))
def test_oracle_matches_kernel_on_random_artinian_instances(seed):
    _label, _R, M = artinian_instance(seed)
    C = M.complex()
    prof = oracle.cohomology_profile(C)
    for i in C.degrees:
        H = C.cohomology_at(i).module
        got = {t: H.hilbert_function(t) for t in oracle.internal_range(C)}
        assert {t: v for t, v in got.items() if v} == prof.get(i, {})
