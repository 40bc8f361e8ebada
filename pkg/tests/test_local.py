"""Local cohomology profiles, depth, torsion and the canonical element map."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from dgcm import oracle
from dgcm.algebra.modules import Ideal, PresentedModule, same_cyclic_module
from dgcm.algebra.ring import BaseRing, polynomial_ring
from dgcm.algebra.field import GF
from dgcm.dg.algebra import base_dg_ring
from dgcm.dg.derived import certified_inf
from dgcm.dg.module import (BoundError, algebra_as_module, h0_module, koszul_algebra_map,
                            koszul_dg_module, residue_field, restrict_module)
from dgcm.fixtures import inst_a, inst_b, inst_c, inst_d, inst_e
from dgcm.local import (depth, depth_report, koszul_depth, local_cohomology_profile,
                        torsion_saturation, xi_nonzero)

from instances import artinian_instance, random_form

R1, R2, R0, RD, R3 = inst_a(), inst_b(), inst_c(), inst_d(), inst_e()
A = RD.ring
B = R2.ring
RB = base_dg_ring(B)
FIXTURES = {"D": RD, "C": R0, "A": R1, "B": R2, "E": R3, "Bbase": RB}


def h0_of_dualizing_a():
    img = koszul_algebra_map(R1, R0, [[1], [1]])
    return restrict_module(img, algebra_as_module(R0), R1).twist(1)


# ---------------------------------------------------------------- profiles

@pytest.mark.parametrize("name,nonzero", [
    ("D", [2]), ("C", [1]), ("A", [0, 1]), ("B", [-1, 0]), ("E", [0, 2]), ("Bbase", [0]),
])
def test_profile_of_regular_module(name, nonzero):
    prof = local_cohomology_profile(algebra_as_module(FIXTURES[name]))
    assert prof.nonzero == nonzero
    assert prof.window == (None, None)


def test_profile_of_polynomial_ring_has_local_hilbert_data():
    prof = local_cohomology_profile(algebra_as_module(RD))
    # H^2_m(Q[x,y]) has infinite length, so no Hilbert data is recorded
    assert prof.hilbert == {}
    prof = local_cohomology_profile(residue_field(RD))
    assert prof.nonzero == [0] and prof.hilbert == {0: {0: 1}}


def test_artinian_profile_matches_raw_cohomology():
    for M in (algebra_as_module(R2), residue_field(R2), algebra_as_module(R2).shift(2)):
        prof = local_cohomology_profile(M)
        raw = oracle.cohomology_profile(M.complex())
        assert prof.nonzero == sorted(raw)
        for i, h in prof.hilbert.items():
            assert {t: v for t, v in h.items() if v} == raw[i]


def test_profile_serializes():
    d = local_cohomology_profile(algebra_as_module(R1)).to_dict()
    assert d["nonzero_degrees"] == [0, 1] and d["amp"] == 1 and d["method"] == "duality"


# ---------------------------------------------------------------- depth

@pytest.mark.parametrize("name,expected", [
    ("D", 2), ("C", 1), ("A", 0), ("B", -1), ("E", 0), ("Bbase", 0),
])
def test_depth_both_routes_agree(name, expected):
    rep = depth_report(algebra_as_module(FIXTURES[name]))
    assert rep["rhom_route"] == rep["torsion_route"] == rep["depth"] == expected


@pytest.mark.parametrize("M,expected", [
    (lambda: residue_field(RD), 0),
    (lambda: residue_field(R1), 0),
    (lambda: koszul_dg_module([A("x")], algebra_as_module(RD)), 1),
    (lambda: h0_of_dualizing_a(), 1),
    (lambda: algebra_as_module(RD).shift(1), 1),
])
def test_depth_of_modules(M, expected):
    assert depth(M()) == expected


def test_depth_with_ideal():
    # (x)-depth of A and of A/(y)
    assert depth(algebra_as_module(RD), Ideal(A, [A("x")])) == 1
    assert depth(h0_module(RD, Ideal(A, [A("y")])), Ideal(A, [A("x")])) == 1
    assert depth(h0_module(RD, Ideal(A, [A("x")])), Ideal(A, [A("x")])) == 0


def test_depth_needs_large_enough_bound():
    with pytest.raises(BoundError):
        depth(algebra_as_module(RD), bound=0)


def _depth_bound_cases():
    m = lambda R: Ideal.maximal(R.ring)
    return [
        (algebra_as_module(RD), Ideal(A, [A("x")])),
        (algebra_as_module(RD), m(RD)),
        (residue_field(RD), m(RD)),
        (algebra_as_module(R1), m(R1)),
        (algebra_as_module(R0), m(R0)),
        (algebra_as_module(R2), m(R2)),
        (algebra_as_module(R3), m(R3)),
        (h0_module(RD, Ideal(A, [A("x*y")])), Ideal(A, [A("x")])),
    ]


@pytest.mark.parametrize("case", range(8))
def test_depth_bound_and_equality_case(case):
    M, I = _depth_bound_cases()[case]
    inf = M.bounds().inf
    dI = depth(M, None if I.same_as(Ideal.maximal(M.ring)) else I)
    assert dI >= inf
    T, _reps, _ = torsion_saturation(I, M.cohomology_at(inf).module)
    if not T.is_zero():
        assert dI == inf


# ---------------------------------------------------------------- torsion and Koszul depth

def test_torsion_saturation_examples():
    T, _, _ = torsion_saturation(Ideal.maximal(A), PresentedModule(A, [0]))
    assert T.is_zero()
    N = Ideal(A, [A("x^2")]).quotient_module()
    T, _, _ = torsion_saturation(Ideal(A, [A("x")]), N)
    assert same_cyclic_module(T, N)


@pytest.mark.parametrize("R,sop,expected", [
    (RD, ["x", "y"], 2),
    (R1, ["y"], 0),
    (R0, ["y"], 1),
    (R2, [], -1),
])
def test_koszul_depth(R, sop, expected):
    M = algebra_as_module(R)
    assert koszul_depth(M, sop) == expected == depth(M)


def test_koszul_depth_rejects_non_sop():
    with pytest.raises(ValueError):
        koszul_depth(algebra_as_module(RD), ["x"])


@pytest.mark.parametrize("seed", range(12))
def test_koszul_inf_on_finite_length_instances(seed):
    _label, R, M = artinian_instance(seed)
    rng = random.Random(1000 + seed)
    r = random_form(rng, R.ring, 1, allow_zero=False)
    K = koszul_dg_module([r], M)
    inf_m = certified_inf(M)
    if inf_m is None:
        return
    assert certified_inf(K) <= inf_m


# ---------------------------------------------------------------- xi

@pytest.mark.parametrize("N,i,expected", [
    (lambda: algebra_as_module(RD), 2, True),
    (lambda: algebra_as_module(RD), 1, False),
    (lambda: algebra_as_module(RD), 0, False),
    (lambda: algebra_as_module(R0), 1, True),
    (lambda: algebra_as_module(R0), 0, False),
    (h0_of_dualizing_a, 1, True),
    (h0_of_dualizing_a, 0, False),
])
def test_xi_nonvanishing(N, i, expected):
    cert = xi_nonzero(i, N())
    assert cert.verdict is expected
    if i < depth(N()):
        assert cert.source_zero


def test_xi_certificate_fields():
    d = xi_nonzero(2, algebra_as_module(RD)).to_dict()
    assert d["nonzero"] and d["rank_witness"] >= 1 and d["method"] == "duality"


def test_xi_over_artinian_base():
    cert = xi_nonzero(0, algebra_as_module(RB))
    assert cert.verdict and cert.method == "artinian"


def test_xi_dual_route_needs_free_module():
    with pytest.raises(ValueError):
        xi_nonzero(0, residue_field(RD))


# ---------------------------------------------------------------- properties

@settings(max_examples=10, deadline=None)
@given(st.integers(1, 3))
def test_polynomial_ring_local_cohomology_in_top_degree(n):
    names = ",".join("xyz"[:n])
    P = base_dg_ring(polynomial_ring(names))
    assert local_cohomology_profile(algebra_as_module(P)).nonzero == [n]


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 5), st.integers(-2, 2))
def test_artinian_shift_depth(a, s):
    Bx = base_dg_ring(BaseRing(GF(5), ["x"], None, [f"x^{a}"]))
    M = algebra_as_module(Bx).shift(s)
    assert depth(M) == -s == certified_inf(M)
