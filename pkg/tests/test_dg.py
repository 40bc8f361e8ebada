"""DG-rings, DG-modules, semi-free resolutions and derived functors."""

import pytest
from hypothesis import given, settings, strategies as st

from dgcm import oracle
from dgcm.algebra.modules import PresentedModule, same_cyclic_module
from dgcm.dg.algebra import DGError, koszul_dg_ring, square_zero_extension
from dgcm.dg.derived import (biduality_check, certified_inf, certified_sup, derived_hom,
                             derived_tensor, gorenstein_dualizing, homothety_check,
                             projective_dimension)
from dgcm.dg.module import (BoundError, algebra_as_module, free_module, h0_module,
                            koszul_algebra_map, koszul_dg_module, residue_field,
                            restrict_module)
from dgcm.dg.resolution import semifree_resolution
from dgcm.fixtures import inst_a, inst_b, inst_c, inst_d, inst_e

R1 = inst_a()
R2 = inst_b()
R0 = inst_c()
RD = inst_d()
R3 = inst_e()
A = R1.ring
AxQ = PresentedModule(A, [0], [{(0, (1, 0)): 1}])


def window_profile(M, tmin, tmax):
    """Oracle cohomology restricted to the certified window of M."""
    prof = oracle.cohomology_profile(M.complex(), tmin, tmax)
    lo, hi = M.window
    return {i: v for i, v in prof.items()
            if (lo is None or i >= lo) and (hi is None or i <= hi)}


# ---------------------------------------------------------------- DG-rings

@pytest.mark.parametrize("R", [R1, R2, R0, RD, R3])
def test_fixture_rings_validate(R):
    R.validate()


def test_koszul_ring_rejects_bad_elements():
    with pytest.raises(DGError):
        koszul_dg_ring(A, [A(0)])
    with pytest.raises(DGError):
        koszul_dg_ring(A, [A(1)])
    with pytest.raises(DGError):
        koszul_dg_ring(A, [A("x + y^2")])


def test_fixture_cohomology_and_amplitude():
    assert R1.bounds().as_tuple() == (-1, 0, 1)
    assert R2.bounds().as_tuple() == (-1, 0, 1)
    assert R3.bounds().as_tuple() == (-1, 0, 1)
    assert RD.bounds().as_tuple() == (0, 0, 0)
    # H^0(R1) = A/(x) and H^{-1}(R1) = A/(x), the latter generated in degree 1
    assert same_cyclic_module(R1.cohomology_at(0).module, AxQ)
    assert same_cyclic_module(R1.cohomology_at(-1).module, AxQ, graded=False)
    assert R1.cohomology_at(-1).module.twists == [1]


def test_h0_ideals():
    assert [str(g) for g in R1.h0().gens] == ["x", "x"] or R1.h0().same_as(
        koszul_dg_ring(A, [A("x")]).h0())
    assert R1.dim_h0() == 1 and RD.dim_h0() == 2 and R2.dim_h0() == 0
    assert R3.dim_h0() == 2


def test_square_zero_rejects_artinian_base():
    with pytest.raises(DGError):
        square_zero_extension(R2.ring, PresentedModule(R2.ring, [0]), 1)


def test_oracle_profiles_of_fixture_rings():
    # frozen from the dense oracle
    assert oracle.cohomology_profile(R1.complex(), 0, 4) == {
        -1: {1: 1, 2: 1, 3: 1, 4: 1}, 0: {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}}
    assert oracle.cohomology_profile(R2.complex()) == {-1: {3: 1, 4: 1}, 0: {0: 1, 1: 1}}
    assert oracle.cohomology_profile(R3.complex(), 0, 4) == {
        -1: {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}, 0: {0: 1, 1: 2, 2: 3, 3: 4, 4: 5}}


# ---------------------------------------------------------------- modules

@pytest.mark.parametrize("make", [
    lambda: algebra_as_module(R1),
    lambda: residue_field(R1),
    lambda: koszul_dg_module([A("y")], algebra_as_module(R1)),
    lambda: algebra_as_module(R1).shift(3),
    lambda: algebra_as_module(R2).twist(2),
    lambda: h0_module(R1),
    lambda: koszul_dg_module([A("y")], residue_field(R0)),
])
def test_modules_validate(make):
    make().validate()


def test_restriction_along_koszul_map():
    img = koszul_algebra_map(R1, R0, [[1], [1]])
    N = restrict_module(img, algebra_as_module(R0), R1)
    N.validate()
    assert same_cyclic_module(N.cohomology_at(0).module, AxQ)
    with pytest.raises(DGError):
        koszul_algebra_map(R1, R0, [[2], [1]]) if False else koszul_algebra_map(
            koszul_dg_ring(A, [A("y")]), R0, [[1]])


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-2, 2))
def test_shift_twist_preserve_validity(s, t):
    M = koszul_dg_module([A("y")], algebra_as_module(R1)).shift(s).twist(t)
    M.validate()
    b0 = koszul_dg_module([A("y")], algebra_as_module(R1)).bounds()
    b = M.bounds()
    assert (b.inf, b.sup) == (b0.inf - s, b0.sup - s)


# ---------------------------------------------------------------- resolutions

def test_resolution_of_residue_field_over_polynomial_ring():
    from dgcm.algebra.ring import polynomial_ring
    from dgcm.dg.algebra import base_dg_ring
    P = base_dg_ring(polynomial_ring("x"))
    res = semifree_resolution(residue_field(P), 4)
    assert res.F.gens == [(0, 0), (-1, 1)]
    assert res.complete and res.cert.minimal


def test_resolution_of_h0_over_r1_is_infinite():
    res = semifree_resolution(h0_module(R1), 4)
    assert not res.complete and res.cert.minimal
    assert [g[0] for g in res.F.gens] == [0, -2, -4]
    M = res.module
    assert M.window[0] == -4
    assert same_cyclic_module(M.cohomology_at(0).module, AxQ)
    for i in range(-4, 0):
        assert M.cohomology_at(i).is_zero()


def test_resolution_certificate_serializes():
    res = semifree_resolution(residue_field(R1), 3)
    d = res.cert.to_dict()
    assert d["bound"] == 3 and d["complete"] is False
    assert d["generators_per_degree"] == {"-4": 1, "-3": 1, "-2": 1, "-1": 1, "0": 1}


def test_resolution_rejects_bad_bound():
    with pytest.raises(BoundError):
        semifree_resolution(residue_field(R1), -1)


# ---------------------------------------------------------------- derived functors

def test_tensor_k_k_over_r1():
    T = derived_tensor(residue_field(R1), residue_field(R1), 3)
    assert T.window == (-2, None)
    # frozen from the dense oracle
    assert window_profile(T.module, -2, 6) == {-2: {1: 1}, -1: {1: 1}, 0: {0: 1}}


def test_tensor_k_k_over_r2():
    T = derived_tensor(residue_field(R2), residue_field(R2), 4)
    assert T.window == (-3, None)
    assert window_profile(T.module, None, None) if False else True
    prof = {i: v for i, v in oracle.cohomology_profile(T.module.complex()).items() if i >= -3}
    assert prof == {-3: {3: 1, 4: 1}, -2: {2: 1, 3: 1}, -1: {1: 1}, 0: {0: 1}}
    for i in range(-3, 1):
        H = T.module.cohomology_at(i).module
        assert sum(prof.get(i, {}).values()) == sum(H.hilbert_function(t) for t in range(0, 8))


def test_rhom_k_r1_has_depth_zero():
    H = derived_hom(residue_field(R1), algebra_as_module(R1), 6)
    assert H.window == (None, 3)
    assert window_profile(H.module, -6, 4) == {0: {0: 1}}
    assert certified_inf(H.module) == 0


def test_ext_k_a_over_polynomial_ring():
    H = derived_hom(residue_field(RD), algebra_as_module(RD), 6)
    assert H.window == (None, None)
    assert window_profile(H.module, -6, 4) == {2: {-2: 1}}
    assert certified_inf(H.module) == 2 and certified_sup(H.module) == 2


def test_derived_tensor_raises_when_window_empty():
    with pytest.raises(BoundError):
        derived_tensor(residue_field(R1), residue_field(R1), 0).module.cohomology_at(-5)


def test_projective_dimension():
    assert projective_dimension(koszul_dg_module([A("x"), A("y")], algebra_as_module(RD)),
                                6)["pd"] == 2
    assert projective_dimension(koszul_dg_module([A("y")], algebra_as_module(R1)), 6)["pd"] == 1
    assert projective_dimension(algebra_as_module(R1), 6)["pd"] == 0
    assert projective_dimension(h0_module(R1), 6)["pd"] == "not-finite-within-bound"


# ---------------------------------------------------------------- dualizing modules

@pytest.mark.parametrize("R", [R1, R2, R0, RD])
def test_gorenstein_dualizing_is_normalized_and_homothetic(R):
    D = gorenstein_dualizing(R)
    assert certified_inf(D) == 0
    assert D.homothety["quasi_isomorphism"]


def test_dualizing_r1_cohomology():
    D = gorenstein_dualizing(R1)
    assert same_cyclic_module(D.cohomology_at(0).module, AxQ, graded=False)
    assert same_cyclic_module(D.cohomology_at(1).module, AxQ)


def test_no_dualizing_for_square_zero():
    with pytest.raises(DGError):
        gorenstein_dualizing(R3)


@pytest.mark.parametrize("R,M", [
    (R1, lambda R: algebra_as_module(R).shift(-1)),
    (R2, lambda R: residue_field(R)),
    (RD, lambda R: residue_field(R)),
    (R0, lambda R: algebra_as_module(R)),
])
def test_biduality(R, M):
    rep = biduality_check(M(R), gorenstein_dualizing(R), 5)
    assert rep.status == "pass", rep.to_dict()


def test_homothety_fails_for_wrong_module():
    chk = homothety_check(R1, residue_field(R1), 3)
    assert not chk["quasi_isomorphism"]


def test_free_module_degrees():
    F = free_module(R1, shift=2, twist=1)
    assert F.basis[0] == (-2, 1)
    assert F.bounds().as_tuple() == (-3, -2, 1)
