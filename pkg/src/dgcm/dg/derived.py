"""Derived Hom and tensor over a DG-ring, projective dimension, dualizing
modules and biduality.

Every result carries a window of degrees in which its cohomology is
certified.  Windows come from two sources: the truncation of the
semi-free resolution of the first argument, and windows already attached
to the inputs.  A piece of an input that is only wrong in degrees
``> h`` (or ``< l``) can only disturb the output in a range computed from
the amplitude bounds of the other argument; the estimates below use the
basis degrees of the finite models, which bound inf and sup from outside.
"""

from ..complexes import ComplexMap, cone
from .algebra import DGError
from .module import DGModule, BoundError, free_module
from .resolution import semifree_resolution, minimal_model_tensor_k


def _mx(*xs):
    xs = [x for x in xs if x is not None]
    return max(xs) if xs else None


def _mn(*xs):
    xs = [x for x in xs if x is not None]
    return min(xs) if xs else None


class Derived:
    """Output of a derived functor: the DG-module, the resolution used and
    a provenance record."""

    def __init__(self, module, resolution, provenance):
        self.module = module
        self.resolution = resolution
        self.provenance = provenance

    @property
    def window(self):
        return self.module.window

    def complex(self):
        return self.module.complex()

    def cohomology_at(self, i):
        return self.module.cohomology_at(i)

    def certified_degrees(self):
        lo, hi = self.window
        cx = self.module.complex()
        lo = cx.lo if lo is None else max(lo, cx.lo)
        hi = cx.hi if hi is None else min(hi, cx.hi)
        return range(lo, hi + 1)

    def inf(self):
        """Least degree with nonzero cohomology (None if exact).  Needs the
        window to be open below; raises BoundError when the answer is not
        certified."""
        return certified_inf(self.module)

    def bounds(self):
        return self.module.bounds()


def certified_inf(M):
    lo, hi = M.window
    cx = M.complex()
    if lo is not None and lo > cx.lo:
        raise BoundError(f"infimum needs all low degrees, window is {M.window}")
    top = cx.hi if hi is None else min(hi, cx.hi)
    for i in range(cx.lo, top + 1):
        if not cx.cohomology_at(i).is_zero():
            return i
    if hi is not None and hi < cx.hi:
        raise BoundError(f"no nonzero cohomology in the certified window {M.window}")
    return None


def certified_sup(M):
    lo, hi = M.window
    cx = M.complex()
    if hi is not None and hi < cx.hi:
        raise BoundError(f"supremum needs all high degrees, window is {M.window}")
    bot = cx.lo if lo is None else max(lo, cx.lo)
    for i in range(cx.hi, bot - 1, -1):
        if not cx.cohomology_at(i).is_zero():
            return i
    if lo is not None and lo > cx.lo:
        raise BoundError(f"no nonzero cohomology in the certified window {M.window}")
    return None


def _source_estimates(M):
    """(lowest, highest) degree where M can carry cohomology."""
    lo, hi = M.window
    return _mx(M.lo, lo), _mn(M.hi, hi)


def derived_hom(M, N, bound):
    """RHom_R(M, N) = Hom_R(F, N) for a semi-free resolution F of M."""
    if M.alg is not N.alg and M.alg.rank != N.alg.rank:
        raise DGError("modules over different DG-rings")
    res = semifree_resolution(M, bound)
    F = res.F
    mod = hom_module(F, N)
    flo, fhi = res.module.window
    nlo, nhi = N.window
    m_lo, m_hi = _source_estimates(M)
    lo = None
    hi = None
    if flo is not None:
        hi = _mn(hi, N.lo - flo - 1)
    if fhi is not None:
        lo = _mx(lo, N.hi - fhi + 1)
    if nlo is not None:
        lo = _mx(lo, nlo - m_lo + 1)
    if nhi is not None:
        hi = _mn(hi, nhi - m_hi - 1)
    mod = mod.with_window(lo, hi)
    mod.label = f"RHom({M.label}, {N.label})"
    prov = {"functor": "RHom", "bound": bound, "window": [lo, hi],
            "resolution": res.cert.to_dict()}
    return Derived(mod, res, prov)


def hom_module(F, N):
    """Hom_R(F, N) for a semi-free F with finitely many generators.

    Basis ``(k, u)``: the map sending g_k to u and the other generators to
    0, of degree |u| - |g_k|.  Differential
    ``(d phi)(g_l) = d phi(g_l) - (-1)^p phi(d g_l)`` with
    ``phi(b g) = (-1)^{p|b|} b phi(g)``; the action is ``(a phi)(x) = a phi(x)``.
    """
    R = F.alg
    ring = F.ring
    p = ring.p
    n = N.rank
    basis = []
    for k, (gc, gt) in enumerate(F.gens):
        for u in range(n):
            basis.append((N.basis[u][0] - gc, N.basis[u][1] - gt))
    diff = []
    for k, (gc, _gt) in enumerate(F.gens):
        uses = F.uses(k)
        for u in range(n):
            deg = N.basis[u][0] - gc
            v = {}
            for (w, e), c in N.diff[u].items():
                v[(k * n + w, e)] = c
            sp = -1 if deg % 2 else 1
            for (l, b, e, c) in uses:
                sb = -1 if (deg * R.cdeg(b)) % 2 else 1
                bu = N.act_basis(b, u)
                coef = -sp * sb * c
                for (w, f), x in bu.items():
                    t = (l * n + w, tuple(i + j for i, j in zip(e, f)))
                    y = v.get(t, 0) + coef * x
                    if p:
                        y %= p
                    if y:
                        v[t] = y
                    else:
                        v.pop(t, None)
            diff.append(v)
    act = {}
    for (a, u), img in N.action.items():
        for k in range(F.ngens):
            act[(a, k * n + u)] = {(k * n + w, e): c for (w, e), c in img.items()}
    rels = []
    for r in N.relations:
        for k in range(F.ngens):
            rels.append({(k * n + w, e): c for (w, e), c in r.items()})
    return DGModule(R, basis, diff, act, rels, (None, None), "Hom")


def tensor_module(F, N):
    """F (x)_R N for semi-free F: basis ``g_k (x) u``, differential
    ``d(g (x) u) = d(g) (x) u + (-1)^{|g|} g (x) du`` with
    ``(b g) (x) u = (-1)^{|b||g|} g (x) b u``."""
    R = F.alg
    ring = F.ring
    p = ring.p
    n = N.rank
    basis = []
    for k, (gc, gt) in enumerate(F.gens):
        for u in range(n):
            basis.append((N.basis[u][0] + gc, N.basis[u][1] + gt))
    diff = []
    for k, (gc, _gt) in enumerate(F.gens):
        sg = -1 if gc % 2 else 1
        for u in range(n):
            v = {}
            for (b_u, e), c in F.dgens[k].items():
                b, m = F.split(b_u)
                s = -1 if (R.cdeg(b) * F.gens[m][0]) % 2 else 1
                for (w, f), x in N.act_basis(b, u).items():
                    t = (m * n + w, tuple(i + j for i, j in zip(e, f)))
                    y = v.get(t, 0) + s * c * x
                    if p:
                        y %= p
                    if y:
                        v[t] = y
                    else:
                        v.pop(t, None)
            for (w, e), c in N.diff[u].items():
                t = (k * n + w, e)
                y = v.get(t, 0) + sg * c
                if p:
                    y %= p
                if y:
                    v[t] = y
                else:
                    v.pop(t, None)
            diff.append(v)
    act = {}
    for (a, u), img in N.action.items():
        for k, (gc, _gt) in enumerate(F.gens):
            s = -1 if (R.cdeg(a) * gc) % 2 else 1
            act[(a, k * n + u)] = {(k * n + w, e): (s * c) % p if p else s * c
                                   for (w, e), c in img.items()}
    rels = []
    for r in N.relations:
        for k in range(F.ngens):
            rels.append({(k * n + w, e): c for (w, e), c in r.items()})
    return DGModule(R, basis, diff, act, rels, (None, None), "Tensor")


def derived_tensor(M, N, bound):
    """M (x)^L_R N = F (x)_R N for a semi-free resolution F of M."""
    res = semifree_resolution(M, bound)
    F = res.F
    mod = tensor_module(F, N)
    flo, fhi = res.module.window
    nlo, nhi = N.window
    m_lo, m_hi = _source_estimates(M)
    lo = None
    hi = None
    if flo is not None:
        lo = _mx(lo, flo + N.hi + 1)
    if fhi is not None:
        hi = _mn(hi, fhi + N.lo - 1)
    if nlo is not None:
        lo = _mx(lo, nlo + m_hi + 1)
    if nhi is not None:
        hi = _mn(hi, nhi + m_lo - 1)
    mod = mod.with_window(lo, hi)
    mod.label = f"{M.label} (x)L {N.label}"
    if lo is not None and hi is not None and lo > hi:
        raise BoundError(f"bound {bound} is too small to certify any degree", bound)
    prov = {"functor": "tensor", "bound": bound, "window": [lo, hi],
            "resolution": res.cert.to_dict()}
    return Derived(mod, res, prov)


# ---------------------------------------------------------------- k (x) F

def residue_tensor_dims(F):
    """Dimensions over k of the cohomology of k (x)_R F, per degree.
    Exact for a semi-free F with finitely many generators."""
    from ..oracle import field_rank
    tw, diffs = minimal_model_tensor_k(F)
    p = F.ring.p
    dims = {}
    ranks = {}
    for c, cols in diffs.items():
        n_rows = len(tw.get(c + 1, []))
        mat = [[0] * len(cols) for _ in range(n_rows)]
        for j, col in enumerate(cols):
            for (i, _e), x in col.items():
                mat[i][j] = x
        ranks[c] = field_rank(mat, p)
    for c, lst in tw.items():
        dims[c] = len(lst) - ranks.get(c, 0) - ranks.get(c - 1, 0)
    return {c: v for c, v in sorted(dims.items()) if v}


def projective_dimension(M, bound):
    """pd_R(M) = sup(M) - inf(k (x)^L M).  Returns an integer, or the
    string ``"not-finite-within-bound"`` when generators keep appearing
    down to the resolution floor."""
    res = semifree_resolution(M, bound)
    b = M.bounds()
    if b.exact:
        return {"pd": None, "sup": None, "inf_tensor": None, "exact": True,
                "resolution": res.cert.to_dict()}
    dims = residue_tensor_dims(res.F)
    floor = res.cert.gen_floor
    certified = {c: v for c, v in dims.items() if res.complete or c > floor}
    info = {"sup": b.sup, "tensor_dims": {str(c): v for c, v in certified.items()},
            "resolution": res.cert.to_dict(), "minimal": res.cert.minimal}
    if not res.complete:
        info.update(pd="not-finite-within-bound", inf_tensor=None)
        return info
    inf_t = min(certified) if certified else None
    info.update(pd=None if inf_t is None else b.sup - inf_t, inf_tensor=inf_t)
    return info


# ---------------------------------------------------------------- dualizing

def gorenstein_dualizing(R, bound=4):
    """Right-normalized dualizing module Sigma^{inf R} R of a DG-ring with a
    Gorenstein presentation; the homothety map is verified and recorded."""
    if not R.gorenstein:
        raise DGError("no dualizing constructor for this presentation")
    s = R.bounds().inf
    D = free_module(R, shift=s, label="D")
    D.homothety = homothety_check(R, D, bound)
    if not D.homothety["quasi_isomorphism"]:
        raise DGError("homothety map R -> RHom(D, D) is not a quasi-isomorphism")
    return D


def algebra_module(R):
    return free_module(R, 0, 0, "R")


def dg_map(S, T, image):
    """ComplexMap between the underlying complexes of DG-modules S -> T
    given the images (global vectors of T) of the basis of S."""
    Sc, Tc = S.complex(), T.complex()
    mats = {}
    for u in range(S.rank):
        c, k = S._loc[u]
        img = image(u)
        col = {}
        for (w, e), x in img.items():
            c2, k2 = T._loc[w]
            if c2 != c:
                raise DGError("map is not of degree 0")
            col[(k2, e)] = x
        mats.setdefault(c, [{} for _ in range(Sc.rank(c))])[k] = col
    return ComplexMap(Sc, Tc, mats, check=True)


def quasi_iso_in_window(f, lo, hi):
    """True when the cone of ``f`` is acyclic in the degrees that decide
    H^i(f) for lo <= i <= hi (``None`` = unbounded)."""
    C = cone(f)
    degs = C.degrees
    a = min(degs) if lo is None else lo - 1
    b = max(degs) if hi is None else hi
    bad = [i for i in degs if a <= i <= b and not C.cohomology_at(i).is_zero()]
    return not bad, bad


def homothety_check(R, D, bound):
    """R -> Hom_R(F_D, D), a -> a * id (F_D = D when D is semi-free)."""
    H = derived_hom(D, D, bound)
    F = H.resolution.F
    X = H.module
    n = D.rank
    # the comparison map phi: F -> D as an element of Hom(F, D)
    ident = {}
    for k in range(F.ngens):
        for (w, e), c in H.resolution.phi[k].items():
            ident[(k * n + w, e)] = c
    Rm = algebra_module(R)

    def image(u):
        return X.act(R.basis_vec(u), ident)

    f = dg_map(Rm, X, image)
    lo, hi = X.window
    ok, bad = quasi_iso_in_window(f, lo, hi)
    return {"quasi_isomorphism": ok, "window": [lo, hi], "failing_degrees": bad}


def biduality_check(M, D, bound):
    """Build M -> M^{dd} = RHom(RHom(M, D), D) explicitly and certify it is
    a quasi-isomorphism on the certified degrees."""
    from ..cm import CertReport
    dual = derived_hom(M, D, bound)
    Md = dual.module
    F = dual.resolution.F
    dd = derived_hom(Md, D, bound)
    F2 = dd.resolution.F
    phi2 = dd.resolution.phi
    X = dd.module
    R = M.alg
    n = D.rank

    # ev(g_k)(g'_l) = (-1)^{|g_k||g'_l|} phi2(g'_l)(g_k)
    gen_img = []
    for k, (gc, _t) in enumerate(F.gens):
        v = {}
        for l, (lc, _t2) in enumerate(F2.gens):
            s = -1 if (gc * lc) % 2 else 1
            for (idx, e), c in phi2[l].items():
                kk, w = divmod(idx, n)
                if kk == k:
                    t = (l * n + w, e)
                    y = v.get(t, 0) + s * c
                    if R.ring.p:
                        y %= R.ring.p
                    if y:
                        v[t] = y
                    else:
                        v.pop(t, None)
        gen_img.append(v)
    src = dual.resolution.module

    def image(u):
        a, k = F.split(u)
        return X.act(R.basis_vec(a), gen_img[k])

    f = dg_map(src, X, image)
    lo = _mx(src.window[0], X.window[0])
    hi = _mn(src.window[1], X.window[1])
    ok, bad = quasi_iso_in_window(f, lo, hi)
    rep = CertReport("biduality")
    rep.condition("biduality map is a quasi-isomorphism on certified degrees", ok,
                  {"window": [lo, hi], "failing_degrees": bad})
    rep.invariants["window"] = [lo, hi]
    rep.bounds["bound"] = bound
    if lo is not None and hi is not None and lo > hi:
        rep.resource("bound too small to certify any degree")
    return rep
