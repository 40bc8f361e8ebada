"""Seeded random instances for the randomized test banks."""

import random

from dgcm.algebra.field import GF
from dgcm.algebra.ring import BaseRing, polynomial_ring
from dgcm.dg.algebra import base_dg_ring, koszul_dg_ring
from dgcm.dg.module import algebra_as_module, koszul_dg_module, residue_field
from dgcm.oracle import monomials


def random_form(rng, ring, deg, allow_zero=True):
    """Random homogeneous polynomial of weighted degree ``deg``; without
    ``allow_zero`` the degree drops until a nonzero form exists."""
    p = ring.p or 7
    while deg > 0:
        mons = monomials(ring.weights, deg)
        for _ in range(30):
            terms = {e: c for e in mons
                     if (c := (rng.randrange(p) if rng.random() < 0.6 else 0))}
            f = ring(terms) if terms else ring(0)
            if f or allow_zero:
                return f
        deg -= 1
    raise ValueError("no nonzero form of positive degree")


def artinian_base(rng):
    """F5[x]/(x^a) or F5[x,y]/(x^a, y^b) with small socle degree."""
    if rng.random() < 0.5:
        a = rng.randint(2, 5)
        return BaseRing(GF(5), ["x"], None, [f"x^{a}"])
    a, b = rng.randint(2, 3), rng.randint(2, 3)
    return BaseRing(GF(5), ["x", "y"], None, [f"x^{a}", f"y^{b}"])


def artinian_instance(seed):
    """(label, R, M) over a random Artinian F5 base."""
    rng = random.Random(seed)
    B = artinian_base(rng)
    r = rng.randint(0, 2)
    elems = [random_form(rng, B, rng.randint(1, 2), allow_zero=False) for _ in range(r)]
    R = koszul_dg_ring(B, elems) if elems else base_dg_ring(B)
    kind = rng.choice(["regular", "residue", "koszul", "shift"])
    if kind == "regular":
        M = algebra_as_module(R)
    elif kind == "residue":
        M = residue_field(R)
    elif kind == "koszul":
        M = koszul_dg_module([random_form(rng, B, 1, allow_zero=False)], algebra_as_module(R))
    else:
        M = algebra_as_module(R).shift(rng.randint(-2, 2))
    label = f"seed={seed} base={B.names}/{[B.format(g) for g in B._ideal_src]} " \
            f"koszul={[B.format(e.terms) for e in elems]} module={kind}"
    return label, R, M


def polynomial_ring_xy():
    return polynomial_ring("x,y")


def polynomial_instance(seed):
    """(label, R, M) over F5[x,y] or Q[x,y] with at most one Koszul element."""
    rng = random.Random(10_000 + seed)
    P = BaseRing(GF(5), ["x", "y"]) if rng.random() < 0.5 else polynomial_ring("x,y")
    elems = [random_form(rng, P, rng.randint(1, 2), allow_zero=False)
             for _ in range(rng.randint(0, 1))]
    R = koszul_dg_ring(P, elems) if elems else base_dg_ring(P)
    kind = rng.choice(["regular", "residue", "koszul", "shift"])
    if kind == "regular":
        M = algebra_as_module(R)
    elif kind == "residue":
        M = residue_field(R)
    elif kind == "koszul":
        M = koszul_dg_module([random_form(rng, P, 1, allow_zero=False)], algebra_as_module(R))
    else:
        M = algebra_as_module(R).shift(rng.randint(-2, 2))
    label = f"seed={seed} field={P.p or 'Q'} koszul={[P.format(e.terms) for e in elems]} " \
            f"module={kind}"
    return label, R, M


def _sop(rng, R, need):
    """Random elements whose images generate an m-primary ideal of H^0(R)."""
    from dgcm.algebra.modules import Ideal, krull_dimension
    ring = R.ring
    for _ in range(50):
        elems = [random_form(rng, ring, rng.randint(1, 2), allow_zero=False)
                 for _ in range(need)]
        if krull_dimension(Ideal(ring, list(R.h0().gens) + elems)) == 0:
            return elems
    raise ValueError("no system of parameters found")


def init_instance(seed, rings):
    """(label, R, F, I) satisfying the hypotheses of the intersection
    inequality: F = K(sop; R) and I inside (sop) + ann, so I kills the
    cyclic generator of H^0(F)."""
    from dgcm.algebra.modules import Ideal
    rng = random.Random(20_000 + seed)
    name = rng.choice(sorted(rings) + ["artinian"])
    R = rings.get(name)
    if R is None:
        B = artinian_base(rng)
        els = [random_form(rng, B, 1, allow_zero=False) for _ in range(rng.randint(0, 1))]
        R = koszul_dg_ring(B, els) if els else base_dg_ring(B)
    ring = R.ring
    need = R.dim_h0() + rng.randint(0, 1)
    sop = _sop(rng, R, need) if need else []
    F = koszul_dg_module(sop, algebra_as_module(R))
    pool = list(sop) + list(R.h0().gens)
    gens = [g * random_form(rng, ring, 1, allow_zero=False)
            if rng.random() < 0.5 else g for g in pool if rng.random() < 0.6]
    gens = [g for g in gens if not g.is_zero()]
    I = Ideal(ring, gens)
    label = f"seed={seed} ring={name} sop={[ring.format(f.terms) for f in sop]} " \
            f"I={[ring.format(g.terms) for g in gens]}"
    return label, R, F, I
