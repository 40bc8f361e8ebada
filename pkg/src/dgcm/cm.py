"""Cohen-Macaulay predicates, the maximal Cohen-Macaulay construction and
theorem verifiers.

Every check returns a :class:`CertReport`.  A report keeps hypotheses and
conclusions apart: a failed hypothesis gives status ``hypothesis-rejected``
and says nothing about the conclusion; a bound that is too small gives
``resource-bound``.
"""

from .algebra.groebner import ModuleGB
from .algebra.modules import (Ideal, annihilator, krull_dimension, radical_membership)
from .complexes import Bounds
from .oracle import field_rank
from .dg.module import BoundError, algebra_as_module
from .dg.algebra import DGError
from .dg.derived import (derived_hom, derived_tensor, projective_dimension, certified_inf,
                         certified_sup, gorenstein_dualizing)
from .dg.resolution import semifree_resolution, minimal_model_tensor_k
from .local import local_cohomology_profile, depth_report, xi_nonzero

DEFAULT_BOUND = 6


class CertReport:
    """Verdict of a predicate or theorem check."""

    def __init__(self, name):
        self.name = name
        self.hypotheses = []
        self.conditions = []
        self.invariants = {}
        self.bounds = {}
        self.notes = []
        self.resource_error = None

    def hypothesis(self, name, ok, witness=None):
        self.hypotheses.append({"name": name, "ok": bool(ok), "witness": witness})
        return ok

    def condition(self, name, ok, witness=None):
        self.conditions.append({"name": name, "ok": bool(ok), "witness": witness})
        return ok

    def resource(self, msg):
        self.resource_error = str(msg)

    @property
    def hypotheses_ok(self):
        return all(h["ok"] for h in self.hypotheses)

    @property
    def verdict(self):
        # a condition already known to fail decides the conjunction even if
        # a later one ran out of bound
        if not self.hypotheses_ok:
            return None
        if any(not c["ok"] for c in self.conditions):
            return False
        return None if self.resource_error else True

    @property
    def status(self):
        if not self.hypotheses_ok:
            return "hypothesis-rejected"
        v = self.verdict
        if v is None:
            return "resource-bound"
        return "pass" if v else "fail"

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "verdict": self.verdict,
            "hypotheses": self.hypotheses,
            "conditions": self.conditions,
            "invariants": self.invariants,
            "bounds": self.bounds,
            "notes": self.notes,
            "resource_error": self.resource_error,
        }

    def __repr__(self):
        return f"CertReport({self.name}: {self.status})"


def _guard(rep, fn):
    """Run ``fn(rep)``; turn bound exhaustion into a resource verdict."""
    try:
        fn(rep)
    except BoundError as e:
        rep.resource(e)
    return rep


def ring_invariants(R):
    b = R.bounds()
    return {"n": b.amp, "d": R.dim_h0(), "inf": b.inf, "sup": b.sup}


# ---------------------------------------------------------------- rings

def has_constant_amplitude(R):
    """Supp H^{inf R}(R) = Spec H^0(R): every generator of the annihilator
    of the lowest cohomology is nilpotent in H^0(R)."""
    rep = CertReport("constant-amplitude")
    inv = ring_invariants(R)
    rep.invariants.update(inv)
    if inv["n"] == 0:
        rep.condition("amplitude 0", True, "vacuous")
        return rep
    low = R.cohomology_at(inv["inf"]).module
    ann = annihilator(low)
    I0 = R.h0()
    bad = [g for g in ann.gens if not radical_membership(g, I0)]
    rep.invariants["annihilator"] = [str(g) for g in ann.gens]
    rep.invariants["h0_ideal"] = [str(g) for g in I0.gens]
    rep.condition("annihilator of lowest cohomology is nilpotent in H^0",
                  not bad, [str(g) for g in bad] or None)
    return rep


def classify_cm_ring(R):
    """amp(R) = amp(RGamma_m(R))."""
    rep = CertReport("cm-ring")
    inv = ring_invariants(R)
    rep.invariants.update(inv)
    prof = local_cohomology_profile(algebra_as_module(R))
    rep.invariants["torsion_profile"] = prof.to_dict()
    rep.invariants["torsion_amp"] = prof.amp
    rep.condition("amp(R) = amp(RGamma_m(R))", prof.amp == inv["n"],
                  {"amp_R": inv["n"], "amp_torsion": prof.amp})
    if inv["d"] == 0:
        rep.notes.append("dim H^0(R) = 0, so R is Cohen-Macaulay")
    return rep


# ---------------------------------------------------------------- modules

def top_map(M, n, bound):
    """Is H^n(M) -> H^n(M (x)^L k) nonzero?  Computed on the resolution F of
    M: a cycle of F maps to its constant unit-component coefficients on the
    generators of degree n, modulo the image of the differential of F (x) k."""
    res = semifree_resolution(M, bound)
    F = res.F
    Fm = res.module
    if not Fm.trusted(n):
        raise BoundError(f"degree {n} is outside the certified window {Fm.window}", bound)
    H = Fm.complex().cohomology_at(n)
    tw, diffs = minimal_model_tensor_k(F)
    p = F.ring.p
    gens_n = [k for k, g in enumerate(F.gens) if g[0] == n]
    pos = {k: i for i, k in enumerate(gens_n)}
    bnd_rows = []
    for col in diffs.get(n - 1, []):
        row = [0] * len(gens_n)
        for (i, _e), x in col.items():
            row[i] = x
        if any(row):
            bnd_rows.append(row)
    base = field_rank(bnd_rows, p) if bnd_rows else 0
    images = []
    for z in H.reps:
        g = Fm.to_global(n, z)
        row = [0] * len(gens_n)
        for k, c in F.epsilon_matrix(g, n).items():
            row[pos[k]] = c
        nz = any(row) and field_rank(bnd_rows + [row], p) > base
        images.append((row, nz))
    ok = any(nz for _r, nz in images)
    return ok, {"degree": n, "images": [[str(x) for x in r] for r, _ in images],
                "cohomology_generators": len(H.reps)}


def _profile_for(M, rep):
    prof = local_cohomology_profile(M)
    rep.invariants["torsion_profile"] = prof.to_dict()
    lo, hi = prof.window
    return prof


def _certified_bounds(M):
    return Bounds(certified_inf(M), certified_sup(M))


def is_mcm_dgmodule(M, R, bound=DEFAULT_BOUND):
    """amp(M) = amp(RGamma_m M) = amp(R) and sup RGamma_m M = sup M + d."""
    def run(rep):
        inv = ring_invariants(R)
        rep.invariants.update(inv)
        b = _certified_bounds(M)
        prof = _profile_for(M, rep)
        _need_profile(prof, b, inv["d"])
        rep.invariants.update(inf_M=b.inf, sup_M=b.sup, amp_M=b.amp)
        rep.condition("amp(M) = amp(R)", b.amp == inv["n"], {"amp_M": b.amp})
        rep.condition("amp(RGamma_m M) = amp(R)", prof.amp == inv["n"], {"amp_torsion": prof.amp})
        ok = b.sup is not None and prof.sup == b.sup + inv["d"]
        rep.condition("sup(RGamma_m M) = sup(M) + d", ok,
                      {"sup_torsion": prof.sup, "sup_M": b.sup})
    return _guard(CertReport("mcm-dgmodule"), run)


def _need_profile(prof, b, d):
    """The torsion profile must cover inf(M)..sup(M)+d."""
    lo, hi = prof.window
    if b.exact:
        return
    if (lo is not None and lo > b.inf) or (hi is not None and hi < b.sup + d):
        raise BoundError(f"torsion profile window {prof.window} does not cover "
                         f"[{b.inf}, {b.sup + d}]")


def has_maximal_depth(M, R, bound=DEFAULT_BOUND):
    def run(rep):
        inv = ring_invariants(R)
        rep.invariants.update(inv)
        ok, wit = top_map(M, inv["n"], bound)
        rep.condition("H^n(M) -> H^n(k (x)L M) is nonzero", ok, wit)
        dr = depth_report(M, None, bound)
        rep.invariants["depth"] = dr["depth"]
        rep.condition("depth(M) = dim H^0(R)", dr["depth"] == inv["d"], dr)
    rep = CertReport("maximal-depth")
    rep.bounds["bound"] = bound
    return _guard(rep, run)


def is_mcm_dgcomplex(M, R, bound=DEFAULT_BOUND):
    """The five conditions defining a maximal Cohen-Macaulay DG-complex."""
    def run(rep):
        inv = ring_invariants(R)
        rep.invariants.update(inv)
        b = _certified_bounds(M)
        rep.invariants.update(inf_M=b.inf, sup_M=b.sup)
        fin = not b.exact and M.rank < float("inf")
        rep.condition("(1) M is finite with bounded cohomology", fin,
                      {"rank": M.rank, "inf": b.inf, "sup": b.sup})
        ok, wit = top_map(M, inv["n"], bound)
        rep.condition("(2) H^n(M) -> H^n(M (x)L k) is nonzero", ok, wit)
        rep.condition("(3) inf(M) = 0", b.inf == 0, {"inf": b.inf})
        prof = _profile_for(M, rep)
        _need_profile(prof, b, inv["d"])
        rep.condition("(4) amp(RGamma_m M) = n", prof.amp == inv["n"],
                      {"amp_torsion": prof.amp, "nonzero": prof.nonzero})
        dr = depth_report(M, None, bound)
        rep.invariants["depth"] = dr["depth"]
        rep.condition("(5) depth(M) = dim H^0(R)", dr["depth"] == inv["d"], dr)
    rep = CertReport("mcm-dgcomplex")
    rep.bounds["bound"] = bound
    return _guard(rep, run)


def is_mcm_dgcomplex_dual(M, R, D=None, bound=DEFAULT_BOUND):
    """The dual conditions, through M^dag = RHom(M, D)."""
    def run(rep):
        inv = ring_invariants(R)
        rep.invariants.update(inv)
        Dm = D if D is not None else gorenstein_dualizing(R)
        dinf = certified_inf(Dm)
        if not rep.hypothesis("D is right-normalized (inf D = 0)", dinf == 0, {"inf_D": dinf}):
            return
        n, d = inv["n"], inv["d"]
        dual = derived_hom(M, Dm, bound)
        Md = dual.module
        rep.bounds["dual_window"] = list(Md.window)
        binf = certified_inf(Md)
        bsup, closed = _sup_seen(Md)
        # local duality: RGamma_m(M^dag) = RHom(M, Sigma^{-d} E), so both
        # sup(RGamma_m M^dag) and sup(M^dag) are at most d - inf(M)
        cap = None
        minf = certified_inf(M)
        if minf is not None:
            cap = d - minf
            rep.bounds["dual_sup_cap"] = cap
            if not closed and Md.window[1] is not None and Md.window[1] >= cap:
                closed = True
        rep.invariants.update(inf_dual=binf, sup_dual=bsup, sup_dual_certified=closed)
        rep.condition("(1) M is finite with bounded cohomology", binf is not None,
                      {"rank": M.rank})
        i = d - n
        try:
            xi = xi_nonzero(i, Md, Dm, bound)
            rep.condition(f"(2) xi^{i} of M^dag is nonzero", xi.verdict, xi.to_dict())
        except ValueError as e:
            rep.condition(f"(2) xi^{i} of M^dag is nonzero", False, str(e))
        prof = local_cohomology_profile(Md)
        rep.invariants["dual_torsion_profile"] = prof.to_dict()
        psup = prof.sup
        pclosed = prof.window[1] is None or (cap is not None and prof.window[1] >= cap)
        if not pclosed and not (psup is not None and psup > d):
            raise BoundError(f"torsion profile of M^dag certified only up to {prof.window[1]}",
                             bound)
        rep.condition("(3) sup(RGamma_m M^dag) = d", psup == d, {"sup_torsion": psup})
        amp = None if binf is None or bsup is None else bsup - binf
        if not closed and not (amp is not None and amp > n):
            raise BoundError(f"sup(M^dag) not certified in window {Md.window}", bound)
        rep.condition("(4) amp(M^dag) = n", amp == n, {"amp_dual": amp, "certified": closed})
        if not closed and not (bsup is not None and bsup > 0):
            raise BoundError(f"sup(M^dag) not certified in window {Md.window}", bound)
        rep.condition("(5) sup(M^dag) = 0", bsup == 0, {"sup_dual": bsup, "certified": closed})
    rep = CertReport("mcm-dgcomplex-dual")
    rep.bounds["bound"] = bound
    return _guard(rep, run)


def _sup_seen(M):
    """Highest nonzero cohomology degree inside the window, and whether the
    window is open above (so that this is the true supremum)."""
    lo, hi = M.window
    cx = M.complex()
    closed = hi is None or hi >= cx.hi
    top = cx.hi if hi is None else min(hi, cx.hi)
    bot = cx.lo if lo is None else max(lo, cx.lo)
    for i in range(top, bot - 1, -1):
        if not cx.cohomology_at(i).is_zero():
            return i, closed
    return None, closed


# ---------------------------------------------------------------- construction

def construct_mcm(R, D=None, bound=DEFAULT_BOUND):
    """RHom_R(Sigma^n(D^{<=n}), D) for R with constant amplitude.

    Returns ``(module, report)``; the module is None when a hypothesis
    fails.  For a dualizing module of the form Sigma^{inf R} R the smart
    truncation at n is the identity because sup(D) = amp(R).
    """
    rep = CertReport("construct-mcm")
    ca = has_constant_amplitude(R)
    rep.hypothesis("R has constant amplitude", ca.verdict, ca.to_dict()["conditions"])
    if not ca.verdict:
        return None, rep
    Dm = D if D is not None else gorenstein_dualizing(R)
    dinf = certified_inf(Dm)
    if not rep.hypothesis("D is right-normalized (inf D = 0)", dinf == 0, {"inf_D": dinf}):
        return None, rep
    n = ring_invariants(R)["n"]
    dsup = certified_sup(Dm)
    if dsup > n:
        raise DGError("smart truncation of a dualizing module with sup(D) > amp(R) "
                      "is not available")
    rep.notes.append(f"D^(<={n}) = D since sup(D) = {dsup}")
    N = Dm.shift(n)
    out = derived_hom(N, Dm, bound)
    M = out.module
    M.label = f"RHom(S^{n}(D^<={n}), D)"
    rep.invariants.update(n=n, window=list(M.window), rank=M.rank)
    rep.condition("module constructed", True)
    return M, rep


# ---------------------------------------------------------------- theorems

def verify_abf(M, F, bound=DEFAULT_BOUND):
    """depth(M (x)^L F) = depth(M) - pd(F) for semi-free F with sup(F) = 0."""
    def run(rep):
        semi = F.semifree is not None
        if not rep.hypothesis("F is semi-free", semi):
            return
        sF = certified_sup(F)
        if not rep.hypothesis("sup(F) = 0", sF == 0, {"sup_F": sF}):
            return
        T = derived_tensor(F, M, bound)
        left = depth_report(T.module, None, bound)
        right = depth_report(M, None, bound)
        pdi = projective_dimension(F, bound)
        pd = pdi["pd"]
        if not isinstance(pd, int):
            raise BoundError(f"pd(F) not finite within bound {bound}", bound)
        rep.invariants.update(depth_tensor=left["depth"], depth_M=right["depth"], pd_F=pd,
                              tensor_dims=pdi["tensor_dims"])
        rep.condition("depth(M (x)L F) = depth(M) - pd(F)",
                      left["depth"] == right["depth"] - pd,
                      {"lhs": left["depth"], "rhs": right["depth"] - pd})
    rep = CertReport("abf")
    rep.bounds["bound"] = bound
    return _guard(rep, run)


def annihilates_minimal_generator(I, H):
    """Index of a pruned (minimal) generator of H killed by I, or None."""
    pm, _kept = H.prune()
    ring = H.ring
    gb = ModuleGB(ring, pm.twists, pm.relations)
    for c in range(pm.rank):
        if all(gb.contains({(c, e): x for e, x in g.terms.items()}) for g in I.gens):
            return c
    return None


def verify_init(R, F, I, bound=DEFAULT_BOUND):
    """pd(F) + n >= dim H^0(R) - dim H^0(R)/I, with its hypotheses."""
    def run(rep):
        ca = has_constant_amplitude(R)
        if not rep.hypothesis("R has constant amplitude", ca.verdict,
                              ca.to_dict()["conditions"]):
            return
        if not rep.hypothesis("F is semi-free with finitely many generators",
                              F.semifree is not None):
            return
        b = _certified_bounds(F)
        if not rep.hypothesis("F has bounded cohomology with sup(F) = 0", b.sup == 0,
                              {"inf": b.inf, "sup": b.sup}):
            return
        H0 = F.cohomology_at(0).module
        if not rep.hypothesis("H^0(F) != 0", not H0.is_zero(), H0.text()):
            return
        lengths = {}
        for i in range(b.inf, 0):
            dm = F.cohomology_at(i).module.krull_dimension()
            lengths[str(i)] = dm
        if not rep.hypothesis("H^i(F) has finite length for i <= -1",
                              all(v <= 0 for v in lengths.values()), lengths):
            return
        c = annihilates_minimal_generator(I, H0)
        if not rep.hypothesis("I annihilates a minimal generator of H^0(F)", c is not None,
                              {"generator": c, "H0": H0.text()}):
            return
        inv = ring_invariants(R)
        pdi = projective_dimension(F, bound)
        pd = pdi["pd"]
        dimq = krull_dimension(Ideal(R.ring, list(R.h0().gens) + list(I.gens)))
        rep.invariants.update(n=inv["n"], d=inv["d"], pd_F=pd, dim_quotient=dimq)
        if not isinstance(pd, int):
            raise BoundError(f"pd(F) not certified within bound {bound}", bound)
        lhs = pd + inv["n"]
        rhs = inv["d"] - dimq
        rep.invariants["slack"] = lhs - rhs
        rep.condition("pd(F) + n >= dim H^0(R) - dim H^0(R)/I", lhs >= rhs,
                      {"lhs": lhs, "rhs": rhs, "slack": lhs - rhs})
    rep = CertReport("init")
    rep.bounds["bound"] = bound
    return _guard(rep, run)
