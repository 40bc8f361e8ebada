"""Semi-free resolutions by killing cycles.

Given a DG-module ``M`` we build a semi-free ``F`` and a DG-map
``phi: F -> M`` degree by degree from the top.  In degree ``j`` the
cohomology of ``cone(phi)`` is computed on a three-degree slice; each
minimal generator ``(f, m)`` of it (``f`` in ``F^{j+1}``, ``m`` in ``M^j``)
is killed by a new generator ``g`` with ``d g = -f`` and ``phi(g) = m``.
Generators are adjoined down to degree ``-bound - 1``, which makes ``phi`` a
quasi-isomorphism in all degrees ``>= -bound``.
"""

from ..algebra.vec import v_degree
from ..complexes import Complex, ComplexError
from .algebra import base_dg_ring
from .module import DGModule, SemiFree, BoundError


class ResolutionCert:
    """Record of a resolution: the bound, the lowest generator degree
    allowed, the number of generators adjoined per degree, whether the
    resolution is complete (a genuine quasi-isomorphism everywhere) and
    whether it is minimal."""

    def __init__(self, bound, gen_floor, evidence, complete, minimal):
        self.bound = bound
        self.gen_floor = gen_floor
        self.evidence = dict(evidence)
        self.complete = complete
        self.minimal = minimal

    @property
    def certified_from(self):
        return None if self.complete else self.gen_floor + 1

    def to_dict(self):
        return {
            "bound": self.bound,
            "generator_floor": self.gen_floor,
            "generators_per_degree": {str(k): v for k, v in sorted(self.evidence.items())},
            "complete": self.complete,
            "minimal": self.minimal,
        }

    def __repr__(self):
        return (f"ResolutionCert(bound={self.bound}, complete={self.complete}, "
                f"minimal={self.minimal}, gens={self.evidence})")


class Resolution:
    """A semi-free ``F`` with a comparison map ``phi: F -> target``."""

    def __init__(self, F, phi, target, cert):
        self.F = F
        self.phi = phi
        self.target = target
        self.cert = cert
        lo = None if cert.complete else -cert.bound
        tlo, thi = target.window
        if tlo is not None:
            lo = tlo if lo is None else max(lo, tlo)
        self.module = F.to_module(f"F({target.label})").with_window(lo, thi)
        self.module.semifree = F

    def phi_basis(self, u):
        a, k = self.F.split(u)
        return self.target.act(self.F.alg.basis_vec(a), self.phi[k])

    def phi_vec(self, fv):
        p = self.F.ring.p
        out = {}
        for (u, e), c in fv.items():
            img = self.phi_basis(u)
            for (w, f), x in img.items():
                t = (w, tuple(i + j for i, j in zip(e, f)))
                y = out.get(t, 0) + c * x
                if p:
                    y %= p
                if y:
                    out[t] = y
                else:
                    out.pop(t, None)
        return self.target.reduce(out)

    @property
    def complete(self):
        return self.cert.complete


def _indices(basis, c):
    return [u for u, b in enumerate(basis) if b[0] == c]


def _cone_slice(F, phiF, M, j):
    """The complex cone(phi) in degrees j-1, j, j+1 together with the
    index data needed to split vectors of degree j."""
    ring = M.ring
    p = ring.p
    Mc = M.complex()
    Fi = {c: _indices(F.basis, c) for c in (j, j + 1, j + 2, j + 3)}
    Fpos = {c: {u: n for n, u in enumerate(Fi[c])} for c in Fi}
    Mi = {c: _indices(M.basis, c) for c in (j - 1, j, j + 1, j + 2)}
    Mpos = {c: {u: n for n, u in enumerate(Mi[c])} for c in Mi}
    tw, diffs, rels = {}, {}, {}
    for i in (j - 1, j, j + 1):
        nF = len(Fi[i + 1])
        tw[i] = [F.basis[u][1] for u in Fi[i + 1]] + [M.basis[u][1] for u in Mi[i]]
        rels[i] = [{(k + nF, e): c for (k, e), c in r.items()} for r in Mc.rels(i)]
    for i in (j - 1, j):
        nF2 = len(Fi[i + 2])
        cols = []
        for u in Fi[i + 1]:
            col = {}
            for (w, e), c in F.diff[u].items():
                col[(Fpos[i + 2][w], e)] = (-c) % p if p else -c
            for (w, e), c in phiF(u).items():
                col[(Mpos[i + 1][w] + nF2, e)] = c
            cols.append(col)
        for u in Mi[i]:
            col = {}
            for (w, e), c in M.diff[u].items():
                col[(Mpos[i + 1][w] + nF2, e)] = c
            cols.append(col)
        diffs[i] = cols
    cx = Complex(ring, tw, diffs, rels, check=False)
    return cx, Fi[j + 1], Mi[j]


def semifree_resolution(M, bound, max_generators=5000):
    """Resolve ``M`` by a semi-free module, quasi-isomorphic in degrees
    ``>= -bound``.  Returns a :class:`Resolution` (with ``.module`` and
    ``.cert``).  A semi-free input is its own resolution."""
    if bound is None or bound < 0:
        raise BoundError("the resolution bound must be a nonnegative integer", bound)
    R = M.alg
    ring = M.ring
    p = ring.p
    if M.semifree is not None:
        F = M.semifree
        phi = [{(F.index(0, k), ring.zero_exp): ring.field.one} for k in range(F.ngens)]
        cert = ResolutionCert(bound, None, _count(F), True, F.is_minimal())
        return Resolution(F, phi, M, cert)
    F = SemiFree(R)
    phi = []
    cache = {}

    def phiF(u):
        if u not in cache:
            a, k = F.split(u)
            cache[u] = M.act(R.basis_vec(a), phi[k])
        return cache[u]

    gen_floor = -bound - 1
    evidence = {}
    complete = False
    if M.rank == 0:
        cert = ResolutionCert(bound, gen_floor, {}, True, True)
        return Resolution(F, phi, M, cert)
    j = M.hi
    checked = None
    while j >= gen_floor:
        cx, fidx, midx = _cone_slice(F, phiF, M, j)
        H = cx.cohomology_at(j)
        nF = len(fidx)
        reps = sorted(enumerate(H.reps),
                      key=lambda t: (v_degree(t[1], cx.tw(j), ring.wdeg), t[0]))
        added = 0
        for _n, rep in reps:
            deg = v_degree(rep, cx.tw(j), ring.wdeg)
            dg = {}
            m = {}
            for (k, e), c in rep.items():
                if k < nF:
                    dg[(fidx[k], e)] = (-c) % p if p else -c
                else:
                    m[(midx[k - nF], e)] = c
            F.add_generator(j, deg, dg)
            phi.append(m)
            added += 1
            if F.ngens > max_generators:
                raise BoundError(f"more than {max_generators} generators needed", bound)
        if added:
            evidence[j] = added
        # below M the cone only involves F; once it is acyclic there the
        # resolution is finished
        if not added and j <= M.lo and (checked is None or j < checked):
            bad = _lowest_defect(F, phiF, M, j)
            if bad is None:
                complete = True
                break
            checked = bad
        j -= 1
    cert = ResolutionCert(bound, gen_floor, evidence, complete, F.is_minimal())
    return Resolution(F, phi, M, cert)


def _lowest_defect(F, phiF, M, j):
    """Largest i < j where the cone has nonzero cohomology, or None."""
    if not F.basis:
        return None
    bottom = min(min(b[0] for b in F.basis) - 1, M.lo)
    for i in range(j - 1, bottom - 1, -1):
        cx, _f, _m = _cone_slice(F, phiF, M, i)
        if not cx.cohomology_at(i).is_zero():
            return i
    return None


def _count(F):
    out = {}
    for c, _t in F.gens:
        out[c] = out.get(c, 0) + 1
    return out


def complex_as_module(C, alg=None):
    """A complex of (presented) base-ring modules as a DG-module over the
    base ring viewed as a DG-ring."""
    alg = alg or base_dg_ring(C.ring)
    basis, diff, rels = [], [], []
    start = {}
    for i in C.degrees:
        start[i] = len(basis)
        for t in C.tw(i):
            basis.append((i, t))
    for i in C.degrees:
        for col in C.d(i):
            diff.append({(start[i + 1] + k, e): c for (k, e), c in col.items()})
        for r in C.rels(i):
            rels.append({(start[i] + k, e): c for (k, e), c in r.items()})
    return DGModule(alg, basis, diff, {}, rels, (None, None), "C")


def resolve_complex(C):
    """Free complex quasi-isomorphic to a bounded complex of presented
    modules over a polynomial base (finite by the syzygy theorem)."""
    ring = C.ring
    if ring.is_artinian and ring.nvars:
        raise ComplexError("free models over an Artinian base are infinite")
    M = complex_as_module(C)
    bound = -(C.lo - ring.nvars - 2)
    res = semifree_resolution(M, max(bound, 0))
    if not res.complete:
        raise ComplexError("resolution over the base did not terminate")
    out = res.module.complex()
    return Complex(ring, out.twists, out.diffs, {}, check=False)


def minimal_model_tensor_k(F):
    """The complex k (x)_R F for semi-free F: one basis vector per
    generator, differential the constant coefficients of d(g) on
    generators.  Returned as a complex over the residue field (base ring
    with all variables set to zero)."""
    ring = F.ring
    z = ring.zero_exp
    tw = {}
    pos = {}
    for k, (c, t) in enumerate(F.gens):
        lst = tw.setdefault(c, [])
        pos[k] = len(lst)
        lst.append(t)
    diffs = {}
    for k, (c, _t) in enumerate(F.gens):
        col = {}
        for (u, e), x in F.dgens[k].items():
            b, m = F.split(u)
            if b == 0 and e == z:
                col[(pos[m], z)] = x
        diffs.setdefault(c, [{} for _ in tw[c]])[pos[k]] = col
    return tw, diffs
