"""Local cohomology at the maximal ideal, depth, Koszul depth, torsion
submodules and the canonical element map.

Over a polynomial base P in n variables, graded local duality gives
H^i_m(M) != 0 iff Ext^{n-i}_P(M, P) != 0, computed from a free model of the
underlying complex of M.  Over an Artinian base every module is m-torsion
and RGamma_m is the identity.
"""

from .algebra.groebner import ModuleGB
from .algebra.modules import (Ideal, krull_dimension, saturation,
                              subquotient_presentation)
from .complexes import Bounds, Complex, free_model, hom_complexes, free_module_complex
from .dg.module import BoundError, residue_field, h0_module, koszul_dg_module
from .dg.derived import derived_hom, certified_inf, dg_map


class DepthConsistencyError(RuntimeError):
    """The two formulas for depth disagree."""


def _is_artinian(ring):
    return ring.is_artinian or ring.nvars == 0


class TorsionProfile:
    """Nonvanishing of H^i_m(M) per degree, with Hilbert data where the
    local cohomology has finite length, and the trusted degree window."""

    def __init__(self, flags, hilbert, window, method):
        self.flags = dict(sorted(flags.items()))
        self.hilbert = hilbert
        self.window = window
        self.method = method

    @property
    def nonzero(self):
        return [i for i, f in self.flags.items() if f]

    @property
    def bounds(self):
        nz = self.nonzero
        return Bounds(min(nz), max(nz)) if nz else Bounds()

    @property
    def inf(self):
        return self.bounds.inf

    @property
    def sup(self):
        return self.bounds.sup

    @property
    def amp(self):
        return self.bounds.amp

    def to_dict(self):
        b = self.bounds
        return {
            "method": self.method,
            "nonzero_degrees": self.nonzero,
            "inf": b.inf, "sup": b.sup, "amp": b.amp,
            "window": list(self.window),
            "hilbert": {str(i): {str(t): v for t, v in sorted(h.items())}
                        for i, h in sorted(self.hilbert.items())},
        }

    def __repr__(self):
        return f"TorsionProfile({self.nonzero}, window={self.window})"


def _as_complex_and_window(M):
    if isinstance(M, Complex):
        return M, (None, None), None
    return M.complex(), M.window, getattr(M, "sup_bound", None)


def local_cohomology_profile(M):
    """Torsion profile of a complex or DG-module (its underlying complex
    over the base ring carries the same local cohomology)."""
    C, (wlo, whi), _ = _as_complex_and_window(M)
    ring = C.ring
    if _is_artinian(ring):
        flags, hilb = {}, {}
        lo = C.lo if wlo is None else max(wlo, C.lo)
        hi = C.hi if whi is None else min(whi, C.hi)
        for i in range(lo, hi + 1):
            h = C.cohomology_at(i).module
            flags[i] = not h.is_zero()
            if flags[i]:
                hilb[i] = h.hilbert_data(*_hilbert_range(h))
        return TorsionProfile(flags, hilb, (wlo, whi), "artinian")
    n = ring.nvars
    Fm = free_model(C)
    P = free_module_complex(ring)
    E = hom_complexes(Fm, P)
    tlo = None if wlo is None else wlo + n + 1
    thi = None if whi is None else whi - 1
    sigma = sum(ring.weights)
    flags, hilb = {}, {}
    for q in E.degrees:
        i = n - q
        if (tlo is not None and i < tlo) or (thi is not None and i > thi):
            continue
        ext = E.cohomology_at(q).module
        flags[i] = not ext.is_zero()
        if flags[i] and ext.length() is not None:
            tmin, tmax = _hilbert_range(ext)
            data = ext.hilbert_data(tmin, tmax)
            hilb[i] = {-t - sigma: v for t, v in data.items() if v}
    # degrees outside the Ext range but inside the window vanish
    return TorsionProfile(flags, hilb, (tlo, thi), "duality")


def _hilbert_range(module):
    if not module.twists:
        return 0, -1
    lo = min(module.twists)
    return lo, lo + (module._socle_bound() or 0)


def profile_is_certified_for(profile, lo, hi):
    """Whether the profile window covers degrees lo..hi."""
    wlo, whi = profile.window
    return (wlo is None or wlo <= lo) and (whi is None or whi >= hi)


# ---------------------------------------------------------------- depth

def depth_report(M, ideal=None, bound=6):
    """Depth by both routes.  With ``ideal`` given only the RHom route
    applies (torsion at I is not computed by duality)."""
    R = M.alg
    src = residue_field(R) if ideal is None else h0_module(R, ideal)
    H = derived_hom(src, M, bound)
    out = {"bound": bound, "rhom_window": list(H.window)}
    try:
        r1 = certified_inf(H.module)
    except BoundError as e:
        raise BoundError(f"depth not certified at bound {bound}: {e}", bound)
    out["rhom_route"] = r1
    if ideal is None:
        prof = local_cohomology_profile(M)
        wlo, whi = prof.window
        r2 = prof.inf
        if wlo is not None:
            raise BoundError("torsion profile window is not open below", bound)
        if r2 is None and whi is not None and r1 is not None and r1 > whi:
            raise BoundError("torsion profile window does not reach the depth", bound)
        out["torsion_route"] = r2
        if r1 != r2:
            raise DepthConsistencyError(
                f"inf RHom(k, M) = {r1} but inf RGamma_m(M) = {r2}")
    out["depth"] = r1
    return out


def depth(M, ideal=None, bound=6):
    """I-depth of M (maximal ideal by default); None for an exact M."""
    return depth_report(M, ideal, bound)["depth"]


def torsion_saturation(ideal, N):
    """Gamma_I(N) as ``(module, generators, steps)``: the submodule of
    elements killed by a power of I, a presentation of it, its generators
    inside N, and the number of colon steps until the chain stabilised."""
    ring = N.ring
    gens, steps = saturation(ring, N.twists, [], N.relations, ideal)
    gb = ModuleGB(ring, N.twists, N.relations)
    gens = [g for g in gens if not gb.contains(g)]
    module, reps = subquotient_presentation(ring, N.twists, gens, N.relations, check=False)
    return module, reps, steps


def koszul_depth(M, sop, bound=6):
    """inf K(sop; M) + len(sop) for a sequence whose image generates an
    m-primary ideal of H^0(R)."""
    R = M.alg
    ring = M.ring
    sop = [ring(f) if not hasattr(f, "terms") else f for f in sop]
    I = Ideal(ring, list(R.h0().gens) + list(sop))
    dim = krull_dimension(I)
    if dim != 0:
        raise ValueError(f"not a system of parameters: dim H0(R)/(sop) = {dim}")
    K = koszul_dg_module(sop, M)
    inf = certified_inf(K)
    return None if inf is None else inf + len(sop)


# ---------------------------------------------------------------- xi map

class XiCertificate:
    def __init__(self, index, verdict, images, bound, window, method, source_zero):
        self.index = index
        self.verdict = verdict
        self.images = images
        self.bound = bound
        self.window = window
        self.method = method
        self.source_zero = source_zero

    @property
    def rank(self):
        return sum(1 for _v, nz in self.images if nz)

    def to_dict(self):
        return {
            "index": self.index, "nonzero": self.verdict, "rank_witness": self.rank,
            "images": [{"vector": v, "nonzero": nz} for v, nz in self.images],
            "bound": self.bound, "window": list(self.window), "method": self.method,
            "source_zero": self.source_zero,
        }


def xi_nonzero(i, N, D=None, bound=6):
    """Decide whether xi^i_N: Ext^i_R(k, N) -> H^i_m(N) is nonzero.

    The map comes from R -> k lifted to the resolution of k: evaluation at
    the degree-0 generator, ev: Hom_R(F_k, N) -> N.  Over a polynomial base
    the dual map Ext^{n-i}_P(N, P) -> Ext^{n-i}_P(Hom(F_k, N), P) is tested;
    over an Artinian base H^i(ev) is tested directly.
    """
    R = N.alg
    ring = N.ring
    k = residue_field(R)
    H = derived_hom(k, N, bound)
    X = H.module
    F = H.resolution.F
    n = N.rank
    g0 = next(j for j, g in enumerate(F.gens) if g[0] == 0)
    xlo, xhi = X.window

    def ev(u):
        kk, w = divmod(u, n)
        return {(w, ring.zero_exp): ring.field.one} if kk == g0 else {}

    f = dg_map(X, N, ev)
    if not X.trusted(i):
        raise BoundError(f"Ext^{i}(k, N) is outside the certified window {X.window}", bound)
    src_zero = X.complex().cohomology_at(i).is_zero()
    if _is_artinian(ring):
        imgs, zero = f.induced_on_cohomology(i)
        tgt = f.target
        bnd = [c for c in tgt.d(i - 1) if c] + tgt.rels(i)
        gb = ModuleGB(ring, tgt.tw(i), bnd)
        images = [(_vtext(ring, v), not gb.contains(v)) for v in imgs]
        return XiCertificate(i, not zero, images, bound, X.window, "artinian", src_zero)
    if xhi is not None and i > xhi - 1:
        raise BoundError(f"dual route needs degree {i} below window top {xhi}", bound)
    if not N.is_free:
        raise ValueError("the dual route needs a module that is free over the base")
    nv = ring.nvars
    q = nv - i
    Xc, Nc = X.complex(), N.complex()
    P = free_module_complex(ring)
    EN = hom_complexes(Nc, P)
    EX = hom_complexes(Xc, P)
    # dual of f in degree q: delta_a (a in N^{-q}) -> sum_x f(x)_a delta_x
    j = -q
    cols = [{} for _ in range(Nc.rank(j))]
    for x, col in enumerate(f.mats.get(j, [])):
        for (a, e), c in col.items():
            cols[a][(x, e)] = c
    reps = EN.cohomology_at(q).reps
    imgs = []
    for z in reps:
        out = {}
        for (a, e), c in z.items():
            for (x, e2), c2 in cols[a].items():
                t = (x, tuple(s + u for s, u in zip(e, e2)))
                y = out.get(t, 0) + c * c2
                if ring.p:
                    y %= ring.p
                if y:
                    out[t] = y
                else:
                    out.pop(t, None)
        imgs.append(out)
    bnd = [c for c in EX.d(q - 1) if c]
    gb = ModuleGB(ring, EX.tw(q), bnd)
    images = [(_vtext(ring, v), bool(v) and not gb.contains(v)) for v in imgs]
    verdict = any(nz for _v, nz in images)
    return XiCertificate(i, verdict, images, bound, X.window, "duality", src_zero)


def _vtext(ring, v):
    comps = {}
    for (c, e), x in v.items():
        comps.setdefault(c, {})[e] = x
    return {str(c): ring.format(t) for c, t in sorted(comps.items())}
