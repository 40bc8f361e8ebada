"""Finitely presented graded modules and ideals over a :class:`BaseRing`.

A :class:`PresentedModule` is ``F / N`` with ``F = oplus ring(-twists[c])``
and ``N`` spanned by relation vectors (plus the defining ideal of the ring
times ``F``, which is always implicit).  Generator ``c`` sits in internal
degree ``twists[c]``.
"""

from itertools import combinations

from . import gbcore
from .groebner import ModuleGB, kernel, GroebnerError
from .ring import Poly
from .vec import v_add, v_mul_poly, v_reduce_ring, v_degree, v_reindex, v_key


class PresentedModule:
    """Graded module given by generators in degrees ``twists`` and
    relation vectors ``relations``.  The zero module has rank 0."""

    def __init__(self, ring, twists, relations=(), check=True):
        self.ring = ring
        self.twists = list(twists)
        rels = []
        for i, r in enumerate(relations):
            r = v_reduce_ring(dict(r), ring)
            if not r:
                continue
            if check and v_degree(r, self.twists, ring.wdeg) is None:
                raise GroebnerError(f"relation {i} is not homogeneous")
            rels.append(r)
        self.relations = rels
        self._gb = None
        self._pruned = None

    @property
    def rank(self):
        return len(self.twists)

    def gb(self):
        if self._gb is None:
            self._gb = ModuleGB(self.ring, self.twists, self.relations)
        return self._gb

    def reduce(self, v):
        return self.gb().reduce(v)

    def prune(self):
        """Equivalent presentation with no unit entries in the relations.

        Returns ``(module, kept)`` where ``kept`` lists the surviving
        original generator indices, in order.  The number of generators is
        then minimal, and the module is zero exactly when the rank is 0.
        """
        if self._pruned is None:
            self._pruned = _prune(self.ring, self.twists, self.relations)
        return self._pruned

    def is_zero(self):
        return self.prune()[0].rank == 0

    def minimal_generators(self):
        """``(count, representatives)``; representatives are unit vectors of
        the original generators that survive pruning."""
        m, kept = self.prune()
        z = self.ring.zero_exp
        return m.rank, [{(c, z): self.ring.field.one} for c in kept]

    def hilbert_function(self, d):
        """dim_k of the degree-``d`` piece."""
        lts = {}
        for el in self.gb().basis:
            lts.setdefault(el.lt[0], []).append(el.lt[1])
        total = 0
        for c, t in enumerate(self.twists):
            for e in _monomials_of_degree(self.ring, d - t):
                if not any(_div(m, e) for m in lts.get(c, ())):
                    total += 1
        return total

    def hilbert_data(self, lo, hi):
        return {d: self.hilbert_function(d) for d in range(lo, hi + 1) if self.hilbert_function(d)}

    def krull_dimension(self):
        """Krull dimension of the module (-1 for the zero module)."""
        lts = {}
        for el in self.gb().basis:
            lts.setdefault(el.lt[0], []).append(el.lt[1])
        best = -1
        for c in range(self.rank):
            best = max(best, _monomial_dimension(self.ring.nvars, lts.get(c, [])))
        return best

    def length(self):
        """Total k-dimension when finite, else None."""
        if self.krull_dimension() > 0:
            return None
        if not self.twists:
            return 0
        lo = min(self.twists)
        return sum(self.hilbert_function(d) for d in range(lo, lo + self._socle_bound() + 1))

    def _socle_bound(self):
        # every standard monomial of a component lies below its pure powers
        nv = self.ring.nvars
        lo = min(self.twists)
        best = 0
        for c, t in enumerate(self.twists):
            lts = [el.lt[1] for el in self.gb().basis if el.lt[0] == c]
            top = 0
            for i in range(nv):
                pw = [m[i] for m in lts if sum(m) == m[i] and m[i] > 0]
                if not pw and not any(sum(m) == 0 for m in lts):
                    return None
                top += (min(pw) if pw else 0) * self.ring.weights[i]
            best = max(best, top + t - lo)
        return best + 1

    def annihilator(self):
        return annihilator(self)

    def text(self):
        tw = ", ".join(str(t) for t in self.twists)
        rels = "; ".join(
            "[" + ", ".join(self.ring.format(f) for f in _entries(r, self.rank)) + "]"
            for r in self.relations)
        return f"coker(twists=[{tw}], relations=[{rels}])"

    def __repr__(self):
        return f"PresentedModule(rank={self.rank}, relations={len(self.relations)})"


def _entries(v, n):
    out = [dict() for _ in range(n)]
    for (k, e), c in v.items():
        out[k][e] = c
    return out


def _div(a, b):
    return all(x <= y for x, y in zip(a, b))


def _monomials_of_degree(ring, d):
    """All exponent vectors of weighted degree d, in a fixed order."""
    if d < 0:
        return []
    w = ring.weights
    n = ring.nvars
    out = []

    def rec(i, rem, cur):
        if i == n - 1:
            if rem % w[i] == 0:
                out.append(tuple(cur + [rem // w[i]]))
            return
        for a in range(rem // w[i], -1, -1):
            rec(i + 1, rem - a * w[i], cur + [a])

    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out


def _monomial_dimension(nv, gens):
    """Krull dimension of k[x]/(monomials): largest variable set that no
    generator is supported in.  -1 when 1 is a generator."""
    if any(sum(g) == 0 for g in gens):
        return -1
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    for size in range(nv, -1, -1):
        for S in combinations(range(nv), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def _prune(ring, twists, relations):
    p = ring.p
    z = ring.zero_exp
    tw = list(twists)
    kept = list(range(len(tw)))
    rels = [dict(r) for r in relations]
    while True:
        pivot = None
        for c in range(len(tw) - 1, -1, -1):
            for k, r in enumerate(rels):
                if (c, z) in r:
                    pivot = (c, k)
                    break
            if pivot:
                break
        if pivot is None:
            break
        c, k = pivot
        col = rels[k]
        u = col[(c, z)]
        uinv = ring.field.inv(u)
        new = []
        for j, r in enumerate(rels):
            if j == k:
                continue
            f = {e: v for (cc, e), v in r.items() if cc == c}
            if f:
                f = {e: (-v * uinv) % p if p else -v * uinv for e, v in f.items()}
                r = v_add(r, v_mul_poly(col, f, p), p)
                r = v_reduce_ring(r, ring)
            r = {t: v for t, v in r.items() if t[0] != c}
            if r:
                new.append(r)
        remap = {i: (i if i < c else i - 1) for i in range(len(tw)) if i != c}
        rels = [v_reindex(r, remap) for r in new]
        del tw[c]
        del kept[c]
    rels = [_monic_vec(r, ring, tw) for r in rels]
    return PresentedModule(ring, tw, rels, check=False), kept


def _monic_vec(v, ring, twists):
    key = lambda t: (ring.wdeg(t[1]) + twists[t[0]], ring.order.key(t[1])[1], -t[0])
    lt = max(v, key=key)
    c = v[lt]
    if c == 1:
        return v
    inv = ring.field.inv(c)
    p = ring.p
    return {t: (x * inv) % p if p else x * inv for t, x in v.items()}


# ---------------------------------------------------------------- ideals

class Ideal:
    """Homogeneous ideal given by generators (zero generators dropped)."""

    def __init__(self, ring, gens):
        self.ring = ring
        out = []
        for i, g in enumerate(gens):
            if not isinstance(g, Poly):
                g = ring(g)
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise GroebnerError(f"ideal generator {i} is not homogeneous")
            out.append(g * ring.field.inv(g.leading_coefficient()))
        self.gens = out
        self._gb = None

    @classmethod
    def maximal(cls, ring):
        return cls(ring, ring.gens())

    def vectors(self):
        return [{(0, e): v for e, v in g.terms.items()} for g in self.gens]

    def gb(self):
        if self._gb is None:
            self._gb = ModuleGB(self.ring, [0], self.vectors())
        return self._gb

    def contains(self, f):
        if not isinstance(f, Poly):
            f = self.ring(f)
        return self.gb().contains({(0, e): v for e, v in f.terms.items()})

    def is_unit(self):
        return self.contains(self.ring.one())

    def quotient_module(self, twist=0):
        """``ring/I`` as a cyclic presented module generated in ``twist``."""
        return PresentedModule(self.ring, [twist], self.vectors())

    def leading_monomials(self):
        return [el.lt[1] for el in self.gb().basis]

    def krull_dimension(self):
        return krull_dimension(self)

    def power(self, t):
        gens = [self.ring.one()]
        for _ in range(t):
            seen = {}
            for a in gens:
                for b in self.gens:
                    c = a * b
                    if c:
                        seen.setdefault(tuple(sorted(c.terms.items())), c)
            gens = list(seen.values())
        return Ideal(self.ring, gens)

    def same_as(self, other):
        """Equality by mutual normal-form reduction."""
        return all(other.contains(g) for g in self.gens) and all(self.contains(g) for g in other.gens)

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def krull_dimension(I):
    """Krull dimension of ``ring/I`` from the leading-term ideal; -1 for
    the unit ideal."""
    if isinstance(I, PresentedModule):
        return I.krull_dimension()
    return _monomial_dimension(I.ring.nvars, I.leading_monomials())


def radical_membership(f, I):
    """True iff a power of ``f`` lies in ``I`` (plus the defining ideal).

    Decided by whether ``1`` lies in ``(I, 1 - t*f)`` with one extra
    variable ``t``.
    """
    ring = I.ring
    if not isinstance(f, Poly):
        f = ring(f)
    if f.is_zero():
        return True
    p = ring.p
    nv = ring.nvars
    one = ring.field.one
    gens = []
    for g in [h.terms for h in I.gens] + ring.ideal:
        gens.append({(0, e + (0,)): v for e, v in g.items()})
    aux = {(0, (0,) * (nv + 1)): one}
    for e, v in f.terms.items():
        t = (0, e + (1,))
        aux[t] = (-v) % p if p else -v
    gens.append(aux)
    key = lambda t: (sum(t[1]), tuple(-a for a in reversed(t[1])))
    basis = gbcore.buchberger(gens, key, p, lambda t: sum(t[1]), True)
    return any(sum(el.lt[1]) == 0 for el in basis)


def ideal_intersection(ideals):
    ring = ideals[0].ring
    r = len(ideals)
    col = {(c, ring.zero_exp): ring.field.one for c in range(r)}
    rels = []
    for c, I in enumerate(ideals):
        for g in I.gens:
            rels.append({(c, e): v for e, v in g.terms.items()})
    ker = kernel(ring, [col], [0], [0] * r, rels)
    return Ideal(ring, [Poly(ring, {e: v for (_k, e), v in w.items()}) for w in ker])


def annihilator(M):
    """Annihilator ideal of a presented module."""
    ring = M.ring
    Mp, _kept = M.prune()
    if Mp.rank == 0:
        return Ideal(ring, [ring.one()])
    parts = []
    for c in range(Mp.rank):
        col = {(c, ring.zero_exp): ring.field.one}
        ker = kernel(ring, [col], [Mp.twists[c]], Mp.twists, Mp.relations)
        parts.append(Ideal(ring, [Poly(ring, {e: v for (_k, e), v in w.items()}) for w in ker]))
    if len(parts) == 1:
        return parts[0]
    return ideal_intersection(parts)


def minimal_generators(M):
    return M.minimal_generators()


def subquotient_presentation(ring, twists, cycles, boundaries, rels=(), check=True):
    """Presentation of ``span(cycles) / (span(boundaries) + span(rels))``
    inside ``F/span(rels)``.

    Returns ``(module, representatives)``: the pruned presentation and the
    cycle vectors representing its generators.
    """
    cycles = [c for c in cycles if c]
    boundaries = [b for b in boundaries if b]
    rels = [r for r in rels if r]
    if check:
        gbz = ModuleGB(ring, twists, cycles, rels)
        for i, b in enumerate(boundaries):
            if not gbz.contains(b):
                raise GroebnerError(f"boundary vector {i} is not in the span of the cycles")
    ztw = []
    for i, zv in enumerate(cycles):
        d = v_degree(zv, twists, ring.wdeg)
        if d is None:
            raise GroebnerError(f"cycle vector {i} is not homogeneous")
        ztw.append(d)
    if not cycles:
        return PresentedModule(ring, [], []), []
    relations = kernel(ring, cycles, ztw, twists, list(boundaries) + list(rels))
    M = PresentedModule(ring, ztw, relations, check=False)
    pm, kept = M.prune()
    return pm, [cycles[i] for i in kept]


def module_quotient(ring, twists, sub, rels, ideal):
    """Generators of ``{v in F : g v in span(sub) + span(rels) for g in ideal}``."""
    r = len(twists)
    gens = ideal.gens
    if not gens:
        z = ring.zero_exp
        return [{(c, z): ring.field.one} for c in range(r)]
    tgt = []
    for g in gens:
        tgt += [t - g.degree for t in twists]
    cols = []
    for c in range(r):
        col = {}
        for gi, g in enumerate(gens):
            for e, v in g.terms.items():
                col[(gi * r + c, e)] = v
        cols.append(col)
    trel = []
    for gi in range(len(gens)):
        for s in list(sub) + list(rels):
            trel.append({(gi * r + c, e): v for (c, e), v in s.items()})
    return kernel(ring, cols, list(twists), tgt, trel)


def saturation(ring, twists, sub, rels, ideal, max_steps=64):
    """Generators of the saturation ``(sub :_F ideal^inf)`` (containing
    ``sub`` and ``rels``) and the number of steps until it stabilised."""
    cur = [v for v in list(sub) + list(rels) if v]
    for step in range(1, max_steps + 1):
        nxt = module_quotient(ring, twists, cur, [], ideal)
        gbc = ModuleGB(ring, twists, cur)
        if all(gbc.contains(v) for v in nxt):
            return cur, step
        cur = _dedupe(cur + nxt)
    raise GroebnerError("saturation did not stabilise")


def _dedupe(vs):
    seen = set()
    out = []
    for v in vs:
        k = v_key(v)
        if k not in seen:
            seen.add(k)
            out.append(v)
    return out


def same_cyclic_module(M, N, graded=True):
    """Decide ``M ~= N`` for modules whose pruned presentations are cyclic,
    by comparing twists and relation ideals with mutual normal forms.
    With ``graded=False`` the generator degrees may differ.
    Returns None when either module is not cyclic."""
    a, _ = M.prune()
    b, _ = N.prune()
    if a.rank == 0 or b.rank == 0:
        return a.rank == b.rank
    if a.rank != 1 or b.rank != 1:
        return None
    if graded and a.twists != b.twists:
        return False
    ga = ModuleGB(M.ring, a.twists, a.relations)
    gb = ModuleGB(M.ring, a.twists, b.relations)
    return all(gb.contains(r) for r in a.relations) and all(ga.contains(r) for r in b.relations)
