"""DG-modules over a :class:`DGAlgebra`.

A DG-module is a finite free base-ring module with a bigraded basis
(cohomological degree, internal degree), a differential given on the basis,
and the action of the non-unit algebra basis elements on module basis
elements.  Optional relation vectors turn it into a quotient (used for the
residue field and other presented modules concentrated in one degree).

A module produced from a truncated resolution only has trustworthy
cohomology in a window of degrees; ``window = (lo, hi)`` records it, with
``None`` meaning unbounded on that side.
"""

from ..algebra.ring import Poly
from ..algebra.vec import v_iadd, v_mul_term, v_scale, v_add, v_reduce_ring, v_degree
from .algebra import DGError, _as_complex


class DGModule:
    def __init__(self, alg, basis, diff, action=None, relations=(), window=(None, None),
                 label="", semifree=None, check=False):
        self.alg = alg
        self.ring = alg.ring
        self.basis = [tuple(b) for b in basis]
        if len(diff) != len(self.basis):
            raise DGError("differential must be given on every basis element")
        self.diff = [v_reduce_ring(dict(v), self.ring) for v in diff]
        self.action = {}
        for k, v in (action or {}).items():
            v = v_reduce_ring(dict(v), self.ring)
            if v:
                self.action[k] = v
        self.relations = [r for r in (v_reduce_ring(dict(r), self.ring) for r in relations) if r]
        self.window = tuple(window)
        self.label = label
        self.semifree = semifree
        self._cx = None
        if check:
            self.validate()

    # -- basic data
    @property
    def rank(self):
        return len(self.basis)

    def cdeg(self, u):
        return self.basis[u][0]

    def ideg(self, u):
        return self.basis[u][1]

    @property
    def lo(self):
        return min((c for c, _ in self.basis), default=0)

    @property
    def hi(self):
        return max((c for c, _ in self.basis), default=-1)

    @property
    def is_free(self):
        return not self.relations

    @property
    def exact(self):
        return self.window == (None, None)

    def basis_vec(self, u):
        return {(u, self.ring.zero_exp): self.ring.field.one}

    def act_basis(self, a, u):
        if a == 0:
            return self.basis_vec(u)
        return self.action.get((a, u), {})

    def act(self, av, mv):
        """Product of an algebra vector with a module vector."""
        p = self.ring.p
        out = {}
        for (a, e1), c1 in av.items():
            for (u, e2), c2 in mv.items():
                img = self.act_basis(a, u)
                if img:
                    e = tuple(x + y for x, y in zip(e1, e2))
                    v_iadd(out, v_mul_term(img, e, c1 * c2, p), p)
        return v_reduce_ring(out, self.ring)

    def d(self, mv):
        p = self.ring.p
        out = {}
        for (u, e), c in mv.items():
            v_iadd(out, v_mul_term(self.diff[u], e, c, p), p)
        return out

    # -- underlying complex
    def complex(self):
        if self._cx is None:
            self._cx, self._loc = _as_complex(self.ring, self.basis, self.diff, self.relations)
            self._glob = {}
            for g, (c, k) in self._loc.items():
                self._glob[(c, k)] = g
        return self._cx

    def to_local(self, v):
        """Global vector (single cohomological degree) -> (degree, local vector)."""
        self.complex()
        out = {}
        deg = None
        for (u, e), c in v.items():
            dg, k = self._loc[u]
            deg = dg
            out[(k, e)] = c
        return deg, out

    def to_global(self, deg, v):
        self.complex()
        return {(self._glob[(deg, k)], e): c for (k, e), c in v.items()}

    def degree_indices(self, c):
        return [u for u, b in enumerate(self.basis) if b[0] == c]

    def reduce(self, v):
        """Normal form modulo the relations (vector of one degree)."""
        v = v_reduce_ring(v, self.ring)
        if not v or not self.relations:
            return v
        deg, loc = self.to_local(v)
        return self.to_global(deg, self.complex().reduce(deg, loc))

    def trusted(self, i):
        lo, hi = self.window
        return (lo is None or i >= lo) and (hi is None or i <= hi)

    def cohomology_at(self, i):
        if not self.trusted(i):
            raise BoundError(f"cohomology in degree {i} is outside the certified window {self.window}")
        return self.complex().cohomology_at(i)

    def bounds(self):
        """inf/sup/amp, computed within the certified window."""
        lo, hi = self.window
        cx = self.complex()
        return cx.cohomology_bounds(lo, hi)

    def validate(self):
        """Check d^2 = 0, the Leibniz rule, associativity and unitality on
        basis elements, and compatibility of relations."""
        ring = self.ring
        p = ring.p
        R = self.alg
        tw = [b[1] for b in self.basis]
        for u in range(self.rank):
            du = self.diff[u]
            if du:
                if {self.cdeg(w) for (w, _e) in du} != {self.cdeg(u) + 1}:
                    raise DGError(f"d of module basis element {u} has wrong degree")
                if v_degree(du, tw, ring.wdeg) != self.ideg(u):
                    raise DGError(f"d of module basis element {u} is not homogeneous")
            if self.reduce(self.d(du)):
                raise DGError(f"d o d != 0 on module basis element {u}")
        for a in range(1, R.rank):
            sa = R.cdeg(a)
            sgn = -1 if sa % 2 else 1
            for u in range(self.rank):
                au = self.act_basis(a, u)
                if au:
                    if {self.cdeg(w) for (w, _e) in au} != {self.cdeg(u) + sa}:
                        raise DGError(f"action of {a} on {u} has wrong degree")
                lhs = self.d(au)
                rhs = self.act(R.diff[a], self.basis_vec(u))
                rhs = v_add(rhs, v_scale(self.act(R.basis_vec(a), self.diff[u]), sgn, p), p)
                if self.reduce(v_add(lhs, rhs, p, -1)):
                    raise DGError(f"Leibniz rule fails for algebra element {a} on module element {u}")
                for b in range(1, R.rank):
                    x = self.act(R.basis_vec(a), self.act_basis(b, u))
                    y = self.act(R.mul_basis(a, b), self.basis_vec(u))
                    if self.reduce(v_add(x, y, p, -1)):
                        raise DGError(f"associativity fails on ({a}, {b}, {u})")
        for j, r in enumerate(self.relations):
            if self.reduce(self.d(r)):
                raise DGError(f"differential does not preserve relation {j}")
            for a in range(1, R.rank):
                if self.reduce(self.act(R.basis_vec(a), r)):
                    raise DGError(f"action does not preserve relation {j}")

    # -- operations
    def shift(self, s):
        """Sigma^s M: degrees drop by s, d -> (-1)^s d, and
        a . sigma(u) = (-1)^{s|a|} sigma(a u)."""
        p = self.ring.p
        sign = -1 if s % 2 else 1
        basis = [(c - s, t) for c, t in self.basis]
        diff = [v_scale(v, sign, p) for v in self.diff]
        act = {}
        for (a, u), v in self.action.items():
            sg = -1 if (s * self.alg.cdeg(a)) % 2 else 1
            act[(a, u)] = v_scale(v, sg, p)
        lo, hi = self.window
        win = (None if lo is None else lo - s, None if hi is None else hi - s)
        sf = self.semifree.shift(s) if self.semifree is not None else None
        # sf.to_module() uses the basis a*g, which differs from sigma(a u)
        # by (-1)^{s|a|}, so it is not cached as ``out``
        return DGModule(self.alg, basis, diff, act, self.relations, win,
                        f"S^{s}({self.label})" if s else self.label, semifree=sf)

    def twist(self, t):
        """Shift all internal degrees by t."""
        basis = [(c, x + t) for c, x in self.basis]
        out = DGModule(self.alg, basis, self.diff, self.action, self.relations, self.window,
                       self.label, semifree=None)
        if self.semifree is not None:
            out.semifree = self.semifree.twist(t)
            out.semifree.module = out
        return out

    def with_window(self, lo, hi):
        out = DGModule(self.alg, self.basis, self.diff, self.action, self.relations, (lo, hi),
                       self.label, semifree=self.semifree)
        out._cx = self._cx
        if self._cx is not None:
            out._loc, out._glob = self._loc, self._glob
        return out

    def summary(self):
        cx = self.complex()
        return {i: cx.rank(i) for i in cx.degrees}

    def __repr__(self):
        return f"DGModule({self.label or '?'}, rank={self.rank}, degrees=[{self.lo}, {self.hi}])"


class BoundError(RuntimeError):
    """A degree bound was too small to certify the requested quantity."""

    def __init__(self, msg, bound=None):
        super().__init__(msg)
        self.bound = bound


# ---------------------------------------------------------------- semi-free

class SemiFree:
    """Semi-free DG-module on generators ``g_k`` with ``d(g_k)`` a vector
    over the expanded basis ``(a, g_l)``; expanded index is
    ``l * alg.rank + a``.  Generators may be appended as long as their
    differentials only involve earlier generators."""

    def __init__(self, alg):
        self.alg = alg
        self.ring = alg.ring
        self.gens = []
        self.dgens = []
        self.basis = []
        self.diff = []
        self.module = None
        self._uses = {}

    def copy(self):
        F = SemiFree(self.alg)
        for g, dg in zip(self.gens, self.dgens):
            F.add_generator(g[0], g[1], dg)
        return F

    @property
    def ngens(self):
        return len(self.gens)

    def index(self, a, k):
        return k * self.alg.rank + a

    def split(self, u):
        return u % self.alg.rank, u // self.alg.rank

    def add_generator(self, cdeg, ideg, dvec):
        R = self.alg
        p = self.ring.p
        k = len(self.gens)
        for (u, _e) in dvec:
            if u // R.rank >= k:
                raise DGError("generator differential may only involve earlier generators")
        self.gens.append((cdeg, ideg))
        self.dgens.append(dict(dvec))
        for (u, e), c in dvec.items():
            b, m = self.split(u)
            self._uses.setdefault(m, []).append((k, b, e, c))
        for a in range(R.rank):
            self.basis.append((R.cdeg(a) + cdeg, R.ideg(a) + ideg))
            # d(a g) = d(a) g + (-1)^{|a|} a d(g)
            v = {}
            for (b, e), c in R.diff[a].items():
                v[(self.index(b, k), e)] = c
            if dvec:
                sgn = -1 if R.cdeg(a) % 2 else 1
                av = self.act_alg(R.basis_vec(a), dvec)
                v_iadd(v, av, p, sgn)
            self.diff.append(v_reduce_ring(v, self.ring))
        self.module = None
        return k

    def act_alg(self, av, fv):
        """Algebra vector times a vector of the expanded basis."""
        R = self.alg
        p = self.ring.p
        out = {}
        for (a, e1), c1 in av.items():
            for (u, e2), c2 in fv.items():
                b, m = self.split(u)
                prod = R.mul_basis(a, b)
                for (c, e3), c3 in prod.items():
                    t = (self.index(c, m), tuple(x + y + z for x, y, z in zip(e1, e2, e3)))
                    w = out.get(t, 0) + c1 * c2 * c3
                    if p:
                        w %= p
                    if w:
                        out[t] = w
                    else:
                        out.pop(t, None)
        return v_reduce_ring(out, self.ring)

    def uses(self, k):
        """List of ``(l, b, e, c)``: d(g_l) contains ``c x^e b g_k``."""
        return self._uses.get(k, [])

    def to_module(self, label="F"):
        if self.module is not None:
            return self.module
        R = self.alg
        act = {}
        for u in range(len(self.basis)):
            b, m = self.split(u)
            for a in range(1, R.rank):
                prod = R.mul_basis(a, b)
                if prod:
                    act[(a, u)] = {(self.index(c, m), e): x for (c, e), x in prod.items()}
        self.module = DGModule(R, self.basis, self.diff, act, (), (None, None), label, semifree=self)
        return self.module

    def shift(self, s):
        """Generators move to degree cdeg - s; d(g) picks up (-1)^s."""
        F = SemiFree(self.alg)
        sign = -1 if s % 2 else 1
        p = self.ring.p
        for (c, t), dg in zip(self.gens, self.dgens):
            F.add_generator(c - s, t, v_scale(dg, sign, p))
        return F

    def twist(self, t):
        F = SemiFree(self.alg)
        for (c, x), dg in zip(self.gens, self.dgens):
            F.add_generator(c, x + t, dg)
        return F

    def min_generator_degree(self):
        return min(c for c, _ in self.gens) if self.gens else None

    def max_generator_degree(self):
        return max(c for c, _ in self.gens) if self.gens else None

    def is_minimal(self):
        """True when F (x) k has zero differential: no d(g_k) has a unit
        coefficient on a generator."""
        z = self.ring.zero_exp
        for k, dg in enumerate(self.dgens):
            for (u, e), c in dg.items():
                b, m = self.split(u)
                if b == 0 and e == z and c:
                    return False
        return True

    def epsilon_matrix(self, fv, cdeg):
        """Image in F (x) k of a vector of F: coefficients of the unit
        component's constant terms on generators of degree ``cdeg``."""
        z = self.ring.zero_exp
        out = {}
        for (u, e), c in fv.items():
            b, m = self.split(u)
            if b == 0 and e == z and self.gens[m][0] == cdeg:
                out[m] = c
        return out


def semifree_module(alg, gens, dgens=None, label="F"):
    F = SemiFree(alg)
    dgens = dgens or [{}] * len(gens)
    for g, dg in zip(gens, dgens):
        F.add_generator(g[0], g[1], dg)
    return F.to_module(label)


def free_module(alg, shift=0, twist=0, label=None):
    """Sigma^shift R(-twist) as a semi-free module on one generator."""
    return semifree_module(alg, [(-shift, twist)], label=label or (f"S^{shift}R" if shift else "R"))


def algebra_as_module(alg):
    return free_module(alg, 0, 0, "R")


def presented_module(alg, twists, relations, label="M"):
    """A presented base-module in cohomological degree 0, made into a DG
    module through R -> H^0(R): negative-degree elements act by zero.
    The defining ideal of H^0(R) is appended to the relations."""
    basis = [(0, t) for t in twists]
    rels = [dict(r) for r in relations]
    I0 = alg.h0()
    for c in range(len(twists)):
        for g in I0.gens:
            rels.append({(c, e): v for e, v in g.terms.items()})
    return DGModule(alg, basis, [{} for _ in basis], {}, rels, (None, None), label)


def residue_field(alg):
    """k = H^0(R)/m as a DG-module concentrated in degree 0."""
    ring = alg.ring
    rels = []
    for x in ring.gens():
        rels.append({(0, e): v for e, v in x.terms.items()})
    return presented_module(alg, [0], rels, "k")


def h0_module(alg, ideal=None, label=None):
    """H^0(R)/I as a DG-module concentrated in degree 0."""
    rels = []
    if ideal is not None:
        for g in ideal.gens:
            rels.append({(0, e): v for e, v in g.terms.items()})
    return presented_module(alg, [0], rels, label or ("H0(R)" if ideal is None else "H0(R)/I"))


def koszul_dg_module(elems, M):
    """Koszul DG-module K(elems; M), built one element at a time as the
    cone of multiplication.  Semi-free input gives semi-free output."""
    out = M
    for r in elems:
        out = _koszul_one(r, out)
    return out


def _koszul_one(r, M):
    ring = M.ring
    p = ring.p
    if not isinstance(r, Poly):
        r = ring(r)
    rdeg = r.degree
    if r.is_zero() or rdeg is None:
        raise DGError("Koszul elements must be nonzero and homogeneous")
    R = M.alg
    if M.semifree is not None:
        F = M.semifree
        G = SemiFree(R)
        n = F.ngens
        # generators g_k (old) then e g_k
        for k in range(n):
            G.add_generator(F.gens[k][0], F.gens[k][1], F.dgens[k])
        for k in range(n):
            v = {(G.index(0, k), e): c for e, c in r.terms.items()}
            # - e d(g_k) = - sum c x^e e (b g_m) = - sum (-1)^{|b|} c x^e b (e g_m)
            for (u, e), c in F.dgens[k].items():
                b, m = F.split(u)
                sg = 1 if R.cdeg(b) % 2 else -1
                t = (G.index(b, n + m), e)
                w = v.get(t, 0) + sg * c
                if p:
                    w %= p
                if w:
                    v[t] = w
                else:
                    v.pop(t, None)
            G.add_generator(F.gens[k][0] - 1, F.gens[k][1] + rdeg, v)
        lab = f"K({ring.format(r.terms)}; {M.label})"
        mod = G.to_module(lab)
        return mod
    n = M.rank
    basis = list(M.basis) + [(c - 1, t + rdeg) for c, t in M.basis]
    diff = [dict(v) for v in M.diff]
    for u in range(n):
        v = {(u, e): c for e, c in r.terms.items()}
        for (w, e), c in M.diff[u].items():
            t = (w + n, e)
            x = v.get(t, 0) - c
            if p:
                x %= p
            if x:
                v[t] = x
            else:
                v.pop(t, None)
        diff.append(v)
    act = dict(M.action)
    for (a, u), v in M.action.items():
        sg = -1 if R.cdeg(a) % 2 else 1
        act[(a, u + n)] = {(w + n, e): (sg * c) % p if p else sg * c for (w, e), c in v.items()}
    rels = list(M.relations) + [{(w + n, e): c for (w, e), c in rr.items()} for rr in M.relations]
    return DGModule(R, basis, diff, act, rels, M.window, f"K({ring.format(r.terms)}; {M.label})")


def restrict_module(phi_images, S_module, R):
    """View a module over S as a module over R through an algebra map
    given by the images (vectors over S's basis) of R's basis elements."""
    M = S_module
    act = {}
    for a in range(1, R.rank):
        img = phi_images[a]
        if not img:
            continue
        for u in range(M.rank):
            v = M.act(img, M.basis_vec(u))
            if v:
                act[(a, u)] = v
    return DGModule(R, M.basis, M.diff, act, M.relations, M.window, M.label)


def koszul_algebra_map(R, S, coeffs):
    """Algebra map K(A; f) -> K(A; g) with e_i -> sum_j coeffs[i][j] eps_j,
    where f_i = sum_j coeffs[i][j] g_j.  Both must be Koszul DG-rings over
    the same base; returns the images of all basis elements of R."""
    ring = R.ring
    p = ring.p
    k = len(R.tag[1])
    # basis of R: subsets in the same order used by koszul_dg_ring
    from itertools import combinations
    subsets = []
    for size in range(k + 1):
        subsets += list(combinations(range(k), size))
    gen_img = []
    for i in range(k):
        v = {}
        for j, c in enumerate(coeffs[i]):
            if not isinstance(c, Poly):
                c = ring(c)
            for e, x in c.terms.items():
                v[(1 + j, e)] = x
        gen_img.append(v)
    images = []
    for S_ in subsets:
        v = S.unit()
        for s in S_:
            v = S.mul(v, gen_img[s])
        images.append(v)
    # check the chain-map condition on generators
    for i in range(k):
        lhs = S.d(gen_img[i])
        rhs = R.diff[1 + i]
        if v_reduce_ring(v_add(lhs, rhs, p, -1), ring):
            raise DGError("coefficients do not define a DG-algebra map")
    return images
