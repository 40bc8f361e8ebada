"""Named fixture instances, as session texts and as Python objects."""

from .algebra.field import GF
from .algebra.modules import PresentedModule
from .algebra.ring import BaseRing, polynomial_ring
from .dg.algebra import base_dg_ring, koszul_dg_ring, square_zero_extension

SESSIONS = {
    "inst-d": ("Q[x,y] as a DG-ring (amplitude 0, dimension 2)", """\
# Q[x,y] viewed as a DG-ring
field Q
ring A = poly(x, y)
dg R = base(A)
module Rm = regular(R)
module k = residue(R)
module F = koszul(Rm; x, y)
module Fx = koszul(Rm; x)
ideal m = (x, y)
bound 6
classify R
constant-amplitude R
depth Rm
depth k
profile Rm
koszul-depth Rm x, y
pd F
construct-mcm R -> M
mcm-check M
mcm-dual-check M
mcm-check k
mcm-dual-check k
xi Rm 2
xi Rm 1
verify abf Rm F
verify abf Rm Fx
verify init F m
"""),
    "inst-c": ("K(Q[x,y]; x), quasi-isomorphic to Q[x,y]/(x)", """\
# Koszul complex on x over Q[x,y]
field Q
ring A = poly(x, y)
dg R0 = koszul(A; x)
module Rm = regular(R0)
module k = residue(R0)
module F = koszul(Rm; y)
bound 6
classify R0
depth Rm
profile Rm
construct-mcm R0 -> M
mcm-check M
mcm-dual-check M
mcm-check k
mcm-dual-check k
xi Rm 1
xi Rm 0
verify abf Rm F
"""),
    "inst-a": ("K(Q[x,y]; x, x): amplitude 1, constant amplitude", """\
# Koszul complex on (x, x) over Q[x,y]
field Q
ring A = poly(x, y)
dg R1 = koszul(A; x, x)
module Rm = regular(R1)
module S = shift(Rm, -1)
module k = residue(R1)
module Ky = koszul(Rm; y)
module N0 = kquotient(R1; x)
module H0D = twist(N0, 1)
ideal m = (x, y)
bound 6
classify R1
constant-amplitude R1
depth Rm
profile Rm
koszul-depth Rm y
pd Ky
construct-mcm R1 -> M
mcm-check M
mcm-dual-check M
mcm-check S
mcm-dual-check S
maximal-depth S
mcm-check k
mcm-dual-check k
xi H0D 1
xi H0D 0
verify abf Rm Ky
verify init Ky m
"""),
    "inst-b": ("K(F5[x]/(x^3); x^2): Artinian, amplitude 1", """\
# Koszul complex on x^2 over F5[x]/(x^3)
field F5
ring B = poly(x) / (x^3)
dg R2 = koszul(B; x^2)
module Rm = regular(R2)
module k = residue(R2)
module Kx = koszul(Rm; x)
ideal m = (x)
bound 6
classify R2
depth Rm
profile Rm
koszul-depth Rm
construct-mcm R2 -> M
mcm-check M
mcm-dual-check M
mcm-check k
mcm-dual-check k
verify abf Rm Kx
verify init Kx m
"""),
    "inst-e": ("Q[x,y] with Sigma(A/(x)) adjoined: not of constant amplitude", """\
# square-zero extension of Q[x,y] by Sigma (A/(x))
field Q
ring A = poly(x, y)
module N = quotient(A; x)
dg R3 = sqzero(A; N, 1)
module Rm = regular(R3)
module S = shift(Rm, -1)
bound 6
classify R3
constant-amplitude R3
depth Rm
profile Rm
construct-mcm R3 -> M
mcm-check S
"""),
}


def fixture_names():
    return sorted(SESSIONS)


def fixture_text(name):
    return SESSIONS[name.lower()][1]


def inst_d():
    A = polynomial_ring("x,y")
    return base_dg_ring(A)


def inst_c():
    A = polynomial_ring("x,y")
    return koszul_dg_ring(A, [A("x")])


def inst_a():
    A = polynomial_ring("x,y")
    return koszul_dg_ring(A, [A("x"), A("x")])


def inst_b():
    B = BaseRing(GF(5), ["x"], None, ["x^3"])
    return koszul_dg_ring(B, [B("x^2")])


def inst_e():
    A = polynomial_ring("x,y")
    N = PresentedModule(A, [0], [{(0, (1, 0)): 1}])
    return square_zero_extension(A, N, 1)


RINGS = {"inst-d": inst_d, "inst-c": inst_c, "inst-a": inst_a, "inst-b": inst_b,
         "inst-e": inst_e}
