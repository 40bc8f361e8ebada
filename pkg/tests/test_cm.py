"""Cohen-Macaulay predicates, the MCM construction and theorem verifiers."""

import pytest

from dgcm.algebra.modules import Ideal
from dgcm.cm import (CertReport, classify_cm_ring, construct_mcm, has_constant_amplitude,
                     has_maximal_depth, is_mcm_dgcomplex, is_mcm_dgcomplex_dual,
                     is_mcm_dgmodule, ring_invariants, verify_abf, verify_init)
from dgcm.dg.derived import derived_tensor, gorenstein_dualizing
from dgcm.dg.module import (BoundError, algebra_as_module, koszul_dg_module, residue_field)
from dgcm.fixtures import inst_a, inst_b, inst_c, inst_d, inst_e

R1, R2, R0, RD, R3 = inst_a(), inst_b(), inst_c(), inst_d(), inst_e()
A = RD.ring
GOOD = {"D": RD, "C": R0, "A": R1, "B": R2}
ALL = dict(GOOD, E=R3)


def shifted_ring(R):
    return algebra_as_module(R).shift(-ring_invariants(R)["n"])


# ---------------------------------------------------------------- report

def test_report_status_precedence():
    rep = CertReport("x")
    rep.condition("a", True)
    assert rep.status == "pass" and rep.verdict is True
    rep.resource("out of bound")
    assert rep.status == "resource-bound" and rep.verdict is None
    rep.condition("b", False)
    assert rep.status == "fail" and rep.verdict is False
    rep.hypothesis("h", False)
    assert rep.status == "hypothesis-rejected" and rep.verdict is None
    d = rep.to_dict()
    assert set(d) >= {"name", "status", "verdict", "hypotheses", "conditions", "invariants"}


def test_ring_invariants():
    assert ring_invariants(R1) == {"n": 1, "d": 1, "inf": -1, "sup": 0}
    assert ring_invariants(R2) == {"n": 1, "d": 0, "inf": -1, "sup": 0}
    assert ring_invariants(RD) == {"n": 0, "d": 2, "inf": 0, "sup": 0}


# ---------------------------------------------------------------- ring predicates

@pytest.mark.parametrize("name,expected", [("D", True), ("C", True), ("A", True),
                                           ("B", True), ("E", False)])
def test_constant_amplitude(name, expected):
    assert has_constant_amplitude(ALL[name]).verdict is expected


@pytest.mark.parametrize("name,expected", [("D", True), ("C", True), ("A", True),
                                           ("B", True), ("E", False)])
def test_classify(name, expected):
    rep = classify_cm_ring(ALL[name])
    assert rep.verdict is expected


def test_classify_e_reports_torsion_amplitude_two():
    rep = classify_cm_ring(R3)
    assert rep.invariants["torsion_amp"] == 2 and rep.invariants["n"] == 1


# ---------------------------------------------------------------- module predicates

@pytest.mark.parametrize("name", list(ALL))
def test_shifted_ring_mcm_iff_cm(name):
    R = ALL[name]
    assert is_mcm_dgcomplex(shifted_ring(R), R).verdict is classify_cm_ring(R).verdict


@pytest.mark.parametrize("name", list(GOOD))
def test_both_definitions_agree_on_shifted_ring(name):
    R = GOOD[name]
    M = shifted_ring(R)
    a = is_mcm_dgcomplex(M, R)
    b = is_mcm_dgcomplex_dual(M, R)
    assert a.status == b.status == "pass", (a.to_dict(), b.to_dict())


@pytest.mark.parametrize("name", list(GOOD))
def test_residue_field_is_not_mcm_in_either_form(name):
    R = GOOD[name]
    k = residue_field(R)
    assert is_mcm_dgcomplex(k, R).verdict is False
    assert is_mcm_dgcomplex_dual(k, R).verdict is False


def test_sigma_k_over_polynomial_ring_fails_conditions_3_and_5():
    rep = is_mcm_dgcomplex(residue_field(RD).shift(1), RD)
    failed = [c["name"][:3] for c in rep.conditions if not c["ok"]]
    assert "(3)" in failed and "(5)" in failed


def test_dual_form_rejects_unnormalized_dualizing_module():
    D = gorenstein_dualizing(R1).shift(1)
    rep = is_mcm_dgcomplex_dual(shifted_ring(R1), R1, D)
    assert rep.status == "hypothesis-rejected"


def test_mcm_module_predicate():
    D = gorenstein_dualizing(R1)
    assert is_mcm_dgmodule(D, R1).verdict is True
    assert is_mcm_dgmodule(shifted_ring(R1), R1).verdict is True
    assert is_mcm_dgmodule(residue_field(R1), R1).verdict is False


def test_maximal_depth():
    assert has_maximal_depth(shifted_ring(R1), R1).verdict is True
    assert has_maximal_depth(residue_field(RD), RD).verdict is False


@pytest.mark.parametrize("name", list(GOOD))
def test_mcm_implies_maximal_depth(name):
    R = GOOD[name]
    M, _ = construct_mcm(R)
    assert is_mcm_dgcomplex(M, R).verdict
    assert has_maximal_depth(M, R).verdict


# ---------------------------------------------------------------- construction

@pytest.mark.parametrize("name", list(GOOD))
def test_construct_mcm_passes_both_certificates(name):
    R = GOOD[name]
    M, rep = construct_mcm(R)
    assert rep.status == "pass"
    assert is_mcm_dgcomplex(M, R).status == "pass"
    assert is_mcm_dgcomplex_dual(M, R).status == "pass"


def test_construct_mcm_amplitude_zero_is_the_ring():
    M, _ = construct_mcm(RD)
    assert M.bounds().as_tuple() == (0, 0, 0)
    assert M.cohomology_at(0).module.hilbert_data(0, 3) == {0: 1, 1: 2, 2: 3, 3: 4}


def test_construct_mcm_rejects_non_constant_amplitude():
    M, rep = construct_mcm(R3)
    assert M is None and rep.status == "hypothesis-rejected"


def test_split_property():
    # maximal-depth M, semi-free F with sup 0 and H^0(F) (x) k != 0:
    # H^n(F (x)L M) != 0
    for R, F in [(R1, koszul_dg_module([A("y")], algebra_as_module(R1))),
                 (R2, koszul_dg_module([R2.ring("x")], algebra_as_module(R2)))]:
        M, _ = construct_mcm(R)
        n = ring_invariants(R)["n"]
        T = derived_tensor(F, M, 6).module
        assert not T.cohomology_at(n).is_zero()


# ---------------------------------------------------------------- ABF

@pytest.mark.parametrize("R,M,F,expected", [
    (RD, lambda: algebra_as_module(RD),
     lambda: koszul_dg_module([A("x"), A("y")], algebra_as_module(RD)), (0, 2, 2)),
    (R1, lambda: algebra_as_module(R1),
     lambda: koszul_dg_module([A("y")], algebra_as_module(R1)), (-1, 0, 1)),
    (R2, lambda: residue_field(R2),
     lambda: algebra_as_module(R2), (0, 0, 0)),
])
def test_abf_examples(R, M, F, expected):
    rep = verify_abf(M(), F())
    assert rep.status == "pass"
    inv = rep.invariants
    assert (inv["depth_tensor"], inv["depth_M"], inv["pd_F"]) == expected


def test_abf_hypotheses():
    assert verify_abf(algebra_as_module(RD), residue_field(RD)).status == "hypothesis-rejected"
    F = algebra_as_module(RD).shift(1)
    assert verify_abf(algebra_as_module(RD), F).status == "hypothesis-rejected"


# ---------------------------------------------------------------- INIT

def test_init_slack_zero_instance():
    F = koszul_dg_module([A("x"), A("y")], algebra_as_module(RD))
    rep = verify_init(RD, F, Ideal.maximal(A))
    assert rep.status == "pass"
    assert rep.invariants["slack"] == 0
    assert (rep.invariants["pd_F"], rep.invariants["n"], rep.invariants["d"],
            rep.invariants["dim_quotient"]) == (2, 0, 2, 0)


def test_init_rejects_regular_module_of_r1():
    # H^{-1}(R1) = A/(x) does not have finite length
    rep = verify_init(R1, algebra_as_module(R1), Ideal(A, []))
    assert rep.status == "hypothesis-rejected"
    assert rep.hypotheses[-1]["name"].startswith("H^i(F) has finite length")


def test_init_rejects_non_constant_amplitude():
    rep = verify_init(R3, algebra_as_module(R3), Ideal(A, []))
    assert rep.status == "hypothesis-rejected"


def test_init_rejects_ideal_not_killing_a_generator():
    F = koszul_dg_module([A("x")], algebra_as_module(RD))
    rep = verify_init(RD, F, Ideal(A, [A("y")]))
    assert rep.status == "hypothesis-rejected"


def test_init_artinian():
    rep = verify_init(R2, algebra_as_module(R2), Ideal(R2.ring, []))
    assert rep.status == "pass" and rep.invariants["slack"] == 1


def test_bound_exhaustion_is_resource_bound():
    rep = is_mcm_dgcomplex(shifted_ring(R1), R1, bound=0)
    assert rep.status == "resource-bound" and "bound 0" in rep.resource_error
    # a condition that already failed still decides the verdict
    assert is_mcm_dgcomplex(residue_field(R1), R1, bound=0).status == "fail"
    with pytest.raises(BoundError):
        from dgcm.local import depth
        depth(residue_field(R1), bound=0)
