"""Groebner bases of ideals and of graded submodules of free modules.

The public functions take and return :class:`Poly` objects; the module
machinery (:class:`ModuleGB`, :func:`kernel`) works on raw vectors and is the
backend for every kernel, membership and presentation computation.
"""

from . import gbcore
from .ring import Poly, MonomialOrder
from .vec import v_reduce_ring, v_degree


class GroebnerError(ValueError):
    pass


class InhomogeneousError(GroebnerError):
    def __init__(self, index, what="generator"):
        super().__init__(f"{what} {index} is not homogeneous")
        self.index = index


# ---------------------------------------------------------------- ideals

class IdealBasis:
    """Reduced Groebner basis of an ideal of the ambient polynomial ring,
    remembering the order it was computed for."""

    def __init__(self, ring, polys, order):
        self.ring = ring
        self.order = order
        self.polys = polys
        self._elems = [gbcore.Element({(0, e): v for e, v in f.terms.items()},
                                      (0, f.leading_exponent()), 0) for f in polys]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        if isinstance(other, IdealBasis):
            other = other.polys
        return list(self.polys) == list(other)

    def __repr__(self):
        return "{" + ", ".join(str(f) for f in self.polys) + "}"


def _order_of(ring, order):
    if order is None:
        return ring.order
    if isinstance(order, str):
        return MonomialOrder(order, ring.weights)
    return MonomialOrder(order.name, ring.weights)


def groebner_basis(gens, order=None, ring=None):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``gens`` is a list of :class:`Poly` (or an :class:`Ideal`).  Inputs must
    be homogeneous; the first offending generator index is reported.  Over
    an Artinian quotient ring the defining ideal is appended, so the result
    is a basis of the preimage ideal in the ambient polynomial ring.
    """
    gens = list(getattr(gens, "gens", gens))
    if ring is None:
        if not gens:
            raise GroebnerError("empty generator list needs an explicit ring")
        ring = gens[0].ring
    for i, g in enumerate(gens):
        if not isinstance(g, Poly):
            gens[i] = g = ring(g)
        if not g.is_homogeneous():
            raise InhomogeneousError(i)
    order = _order_of(ring, order)
    raw = [dict(g.terms) for g in gens] + ring.ideal
    elems = gbcore.buchberger(
        [{(0, e): v for e, v in f.items()} for f in raw if f],
        lambda t: order.key(t[1]), ring.p, lambda t: ring.wdeg(t[1]), True)
    amb = ring.ambient()
    polys = [Poly(amb, {e: v for (_c, e), v in g.terms.items()}) for g in elems]
    # smallest degree first; inside a degree, larger leading term first
    polys.sort(key=lambda f: order.key(f.leading_exponent()), reverse=True)
    polys.sort(key=lambda f: f.degree)
    return IdealBasis(amb, polys, order)


def normal_form(f, basis, order=None, cofactors=False):
    """Remainder of ``f`` on division by a Groebner basis.

    With ``cofactors=True`` also return the quotients ``q`` with
    ``f = sum(q_i * basis_i) + remainder``.
    """
    if isinstance(basis, IdealBasis):
        if order is not None and _order_of(basis.ring, order) != basis.order:
            raise GroebnerError("order does not match the order of the basis")
        ring = basis.ring
        elems = basis._elems
        order = basis.order
    else:
        basis = list(basis)
        if not basis:
            return (f, []) if cofactors else f
        ring = basis[0].ring
        order = _order_of(ring, order)
        elems = [gbcore.Element({(0, e): v for e, v in g.terms.items()},
                                (0, max(g.terms, key=order.key)), 0) for g in basis]
    p = ring.p
    monic = []
    for el in elems:
        monic.append(gbcore.Element(gbcore.make_monic(el.terms, el.lt, p), el.lt, 0))
    red = gbcore.Reducer(monic, p, None)
    track = {} if cofactors else None
    terms = f.terms if isinstance(f, Poly) else ring._raw(f, ambient=True)
    rem = red.reduce({(0, e): v for e, v in terms.items()},
                     gbcore.TermKey(lambda t: order.key(t[1])), True, track)
    r = Poly(ring, {e: v for (_c, e), v in rem.items()})
    if not cofactors:
        return r
    qs = []
    for el, m in zip(elems, monic):
        q = track.get(id(m), {})
        inv = ring.field.inv(el.terms[el.lt])
        qs.append(Poly(ring, {e: (v * inv) % p if p else v * inv for e, v in q.items()}))
    return r, qs


def ideal_contains(basis, f):
    return normal_form(f, basis).is_zero()


# ---------------------------------------------------------------- modules

def module_key(ring, twists, split=None):
    """Term key for a free module: degree, then monomial, then position.
    With ``split=r``, components ``>= r`` form a lower block (elimination)."""
    okey = ring.order.key
    wdeg = ring.wdeg
    if split is None:
        return lambda t: (wdeg(t[1]) + twists[t[0]], okey(t[1])[1], -t[0])
    return lambda t: (t[0] < split, wdeg(t[1]) + twists[t[0]], okey(t[1])[1], -t[0])


class ModuleGB:
    """Groebner basis of the submodule of ``F = oplus ring(-twists[c])``
    generated by ``gens`` plus ``rels`` plus the defining ideal times F.

    With ``extended=True`` the basis is computed for the graph of the
    generator map, which gives cofactors (:meth:`lift`) and the syzygies of
    ``gens + rels`` (:attr:`syzygies`).
    """

    def __init__(self, ring, twists, gens, rels=(), extended=False):
        self.ring = ring
        self.twists = list(twists)
        self.rank = len(self.twists)
        self.p = ring.p
        self.extended = extended
        gens = list(gens)
        rels = list(rels)
        r = self.rank
        wdeg = ring.wdeg
        jgens = []
        for c in range(r):
            for g in ring.ideal:
                jgens.append({(c, e): v for e, v in g.items()})
        if not extended:
            self.key = gbcore.TermKey(module_key(ring, self.twists))
            deg = lambda t: wdeg(t[1]) + self.twists[t[0]]
            inp = [g for g in gens + rels if g] + jgens
            self.elements = gbcore.buchberger(inp, self.key, self.p, deg)
            self.basis = self.elements
            self._red = gbcore.Reducer(self.basis, self.p, deg)
            self.syzygies = None
            return
        allg = gens + rels
        s = len(allg)
        ext_tw = list(self.twists)
        for i, g in enumerate(allg):
            d = v_degree(g, self.twists, wdeg) if g else 0
            if d is None:
                raise InhomogeneousError(i, "column")
            ext_tw.append(d)
        self.ext_twists = ext_tw
        self.ngens = s
        self.key = gbcore.TermKey(module_key(ring, ext_tw, split=r))
        deg = lambda t: wdeg(t[1]) + ext_tw[t[0]]
        inp = []
        zero_syz = []
        one = ring.field.one
        z = ring.zero_exp
        for i, g in enumerate(allg):
            row = dict(g)
            row[(r + i, z)] = one
            if g:
                inp.append(row)
            else:
                zero_syz.append({(i, z): one})
        inp += jgens
        for i in range(s):
            for g in ring.ideal:
                inp.append({(r + i, e): v for e, v in g.items()})
        elems = gbcore.buchberger(inp, self.key, self.p, deg)
        self.elements = elems
        self.basis = [el for el in elems if el.lt[0] < r]
        self._red = gbcore.Reducer(self.basis, self.p, deg)
        syz = list(zero_syz)
        for el in elems:
            if el.lt[0] >= r:
                v = {(c - r, e): x for (c, e), x in el.terms.items()}
                v = v_reduce_ring(v, ring)
                if v:
                    syz.append(v)
        self.syzygies = syz

    def reduce(self, v):
        """Normal form of a vector of F (components < rank)."""
        red = self._red
        key = self.key
        p = self.p
        r = self.rank
        f = dict(v)
        rem = {}
        while f:
            t = max(f, key=key)
            if t[0] >= r:
                break
            g = red.find(t)
            if g is None:
                rem[t] = f.pop(t)
                continue
            c = f[t]
            q = tuple(a - b for a, b in zip(t[1], g.lt[1]))
            for (gc, ge), gv in g.terms.items():
                if gc >= r:
                    continue
                tt = (gc, tuple(a + b for a, b in zip(ge, q)))
                w = f.get(tt, 0) - c * gv
                if p:
                    w %= p
                if w:
                    f[tt] = w
                else:
                    f.pop(tt, None)
        return rem

    def contains(self, v):
        return not self.reduce(v)

    def lift(self, v):
        """Cofactors ``w`` (vector over gens+rels) with ``sum w_i g_i = v``
        modulo the defining ideal, or None when v is not in the submodule."""
        if not self.extended:
            raise GroebnerError("lift needs an extended basis")
        red = self._red
        key = self.key
        p = self.p
        r = self.rank
        f = dict(v)
        while f:
            t = max(f, key=key)
            if t[0] >= r:
                break
            g = red.find(t)
            if g is None:
                return None
            c = f[t]
            q = tuple(a - b for a, b in zip(t[1], g.lt[1]))
            for (gc, ge), gv in g.terms.items():
                tt = (gc, tuple(a + b for a, b in zip(ge, q)))
                w = f.get(tt, 0) - c * gv
                if p:
                    w %= p
                if w:
                    f[tt] = w
                else:
                    f.pop(tt, None)
        out = {}
        for (c, e), x in f.items():
            out[(c - r, e)] = (-x) % p if p else -x
        return v_reduce_ring(out, self.ring)

    def leading_terms(self):
        return [el.lt for el in self.basis]


def kernel(ring, cols, src_twists, tgt_twists, tgt_rels=()):
    """Generators of ``{w : sum w_j cols_j in span(tgt_rels)}`` (mod the
    defining ideal), as vectors over the source free module."""
    n = len(cols)
    for j, col in enumerate(cols):
        if col:
            d = v_degree(col, tgt_twists, ring.wdeg)
            if d is None or d != src_twists[j]:
                raise GroebnerError(f"column {j} is not homogeneous of its source degree")
    gb = ModuleGB(ring, tgt_twists, cols, tgt_rels, extended=True)
    out = []
    seen = set()
    for w in gb.syzygies:
        w = {t: v for t, v in w.items() if t[0] < n}
        if not w:
            continue
        key = tuple(sorted(w.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append(w)
    return _sort_vectors(out, src_twists, ring)


def _sort_vectors(vs, twists, ring):
    return sorted(vs, key=lambda v: v_degree(v, twists, ring.wdeg) or 0)


def syzygy_module(mat, ring=None, col_twists=None, row_twists=None):
    """Generating syzygies of a matrix given as rows of polynomials.

    ``mat`` is a list of rows (lists of :class:`Poly`).  Returns syzygies as
    lists of :class:`Poly` (one entry per column).  Twists default to the
    unique consistent choice with row degrees 0.
    """
    rows = [list(r) for r in mat]
    if not rows:
        raise GroebnerError("empty matrix")
    ncols = len(rows[0])
    if ring is None:
        ring = rows[0][0].ring if ncols else None
    rows = [[x if isinstance(x, Poly) else ring(x) for x in r] for r in rows]
    nrows = len(rows)
    if row_twists is None:
        row_twists = [0] * nrows
    if col_twists is None:
        col_twists = []
        for j in range(ncols):
            d = None
            for i in range(nrows):
                f = rows[i][j]
                if f.is_zero():
                    continue
                if f.degree is None:
                    raise GroebnerError(f"entry ({i}, {j}) is not homogeneous")
                dj = f.degree + row_twists[i]
                if d is None:
                    d = dj
                elif d != dj:
                    raise GroebnerError(f"column {j} has inconsistent twists")
            col_twists.append(d if d is not None else 0)
    cols = []
    for j in range(ncols):
        v = {}
        for i in range(nrows):
            for e, c in rows[i][j].terms.items():
                v[(i, e)] = c
        cols.append(v)
    syz = kernel(ring, cols, col_twists, row_twists)
    out = []
    for w in syz:
        ent = [dict() for _ in range(ncols)]
        for (k, e), c in w.items():
            ent[k][e] = c
        out.append([Poly(ring, f) for f in ent])
    return out
