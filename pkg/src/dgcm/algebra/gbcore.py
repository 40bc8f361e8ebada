"""Buchberger's algorithm on raw sparse module elements.

A module element is a dict ``{(component, exponent_tuple): coefficient}``;
an ideal element is the special case where every component is 0.  Nothing in
here knows about rings or twists: callers hand in a term ``key`` function
(larger key = larger term) and the field characteristic ``p``.

Pair selection is the normal strategy (smallest sugar first, input order
breaks ties) with the Gebauer-Moeller installation of new pairs, so repeated
runs on the same input produce the same basis.
"""

import heapq


class Element:
    """Monic basis element with its cached leading term."""

    __slots__ = ("terms", "lc", "lt", "sugar")

    def __init__(self, terms, lt, sugar):
        self.terms = terms
        self.lt = lt
        self.sugar = sugar


def _exp_div(a, b):
    """a / b if b divides a else None."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def _exp_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _exp_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class TermKey:
    """Memoising wrapper around a term key function."""

    __slots__ = ("fn", "cache")

    def __init__(self, fn):
        self.fn = fn
        self.cache = {}

    def __call__(self, t):
        k = self.cache.get(t)
        if k is None:
            k = self.fn(t)
            self.cache[t] = k
        return k


def leading_term(f, key):
    return max(f, key=key)


def make_monic(f, lt, p):
    c = f[lt]
    if c == 1:
        return f
    inv = pow(c, -1, p) if p else 1 / c
    if p:
        return {t: (v * inv) % p for t, v in f.items()}
    return {t: v * inv for t, v in f.items()}


class Reducer:
    """Division by a fixed list of monic elements, indexed by component."""

    def __init__(self, elements, p, degree):
        self.p = p
        self.degree = degree
        self.by_comp = {}
        for g in elements:
            self.add(g)

    def add(self, g):
        self.by_comp.setdefault(g.lt[0], []).append(g)

    def find(self, t):
        lst = self.by_comp.get(t[0])
        if not lst:
            return None
        e = t[1]
        for g in lst:
            if _divides(g.lt[1], e):
                return g
        return None

    def reduce(self, f, key, full=True, track=None):
        """Normal form of ``f``.  With ``full=False`` stop at the first
        irreducible leading term (top reduction).  ``track``, when given, is a
        dict that accumulates the quotient ``{id(g): {exp: coeff}}``."""
        p = self.p
        f = dict(f)
        rem = {}
        while f:
            t = max(f, key=key)
            g = self.find(t)
            if g is None:
                if not full:
                    rem.update(f)
                    return rem
                rem[t] = f.pop(t)
                continue
            c = f[t]
            q = _exp_div(t[1], g.lt[1])
            if track is not None:
                d = track.setdefault(id(g), {})
                v = d.get(q, 0) + c
                if p:
                    v %= p
                if v:
                    d[q] = v
                else:
                    d.pop(q, None)
            for (gc, ge), gv in g.terms.items():
                tt = (gc, tuple(a + b for a, b in zip(ge, q)))
                v = f.get(tt, 0) - c * gv
                if p:
                    v %= p
                if v:
                    f[tt] = v
                else:
                    f.pop(tt, None)
        return rem


def _sugar(f, degree):
    return max(degree(t) for t in f)


def buchberger(gens, key, p, degree, product_criterion=False):
    """Reduced Groebner basis of the module generated by ``gens``.

    ``degree(term)`` gives the (weighted, twisted) degree used for sugar.
    Returns a list of :class:`Element`, sorted by leading term descending.
    """
    key = key if isinstance(key, TermKey) else TermKey(key)
    basis = []
    red = Reducer([], p, degree)
    live = {}
    heap = []
    counter = 0

    for idx, f in enumerate(gens):
        f = {t: v for t, v in f.items() if v}
        if not f:
            continue
        heapq.heappush(heap, (_sugar(f, degree), 0, idx, counter, ("gen", f)))
        counter += 1

    while heap:
        sugar, _kind, _a, _cnt, item = heapq.heappop(heap)
        if item[0] == "gen":
            h = item[1]
        else:
            i, j = item[1], item[2]
            if live.pop((i, j), None) is None:
                continue
            h = _spoly(basis[i], basis[j], p)
            if not h:
                continue
        h = red.reduce(h, key, full=False)
        if not h:
            continue
        lt = max(h, key=key)
        h = make_monic(h, lt, p)
        new = Element(h, lt, max(sugar, _sugar(h, degree)))
        n = len(basis)
        # Gebauer-Moeller: prune old pairs made redundant by the new element
        for (i, j), s in list(live.items()):
            lij = _exp_lcm(basis[i].lt[1], basis[j].lt[1])
            if basis[i].lt[0] != lt[0]:
                continue
            if not _divides(lt[1], lij):
                continue
            if _exp_lcm(basis[i].lt[1], lt[1]) != lij and _exp_lcm(basis[j].lt[1], lt[1]) != lij:
                del live[(i, j)]
        cand = []
        for i, g in enumerate(basis):
            if g.lt[0] != lt[0]:
                continue
            cand.append((i, _exp_lcm(g.lt[1], lt[1])))
        # criterion M: drop pairs whose lcm is a proper multiple of another's
        keep = []
        for i, l in cand:
            proper = False
            for i2, l2 in cand:
                if i2 != i and l2 != l and _divides(l2, l):
                    proper = True
                    break
            if not proper:
                keep.append((i, l))
        # criterion F: among equal lcms keep one (prefer a coprime one for B)
        seen = {}
        for i, l in keep:
            coprime = product_criterion and _exp_mul(basis[i].lt[1], lt[1]) == l
            if l in seen:
                if coprime:
                    seen[l] = (i, True)
                continue
            seen[l] = (i, coprime)
        basis.append(new)
        red.add(new)
        for l, (i, coprime) in seen.items():
            if coprime:
                continue
            s = _pair_sugar(basis[i], new, l, degree)
            live[(i, n)] = s
            heapq.heappush(heap, (s, 1, i, counter, ("pair", i, n)))
            counter += 1

    return _interreduce(basis, key, p, degree)


def _pair_sugar(g, h, l, degree):
    comp = g.lt[0]
    sg = g.sugar - degree(g.lt) + degree((comp, l))
    sh = h.sugar - degree(h.lt) + degree((comp, l))
    return max(sg, sh)


def _spoly(g, h, p):
    l = _exp_lcm(g.lt[1], h.lt[1])
    mg = _exp_div(l, g.lt[1])
    mh = _exp_div(l, h.lt[1])
    out = {}
    for (c, e), v in g.terms.items():
        out[(c, _exp_mul(e, mg))] = v
    for (c, e), v in h.terms.items():
        t = (c, _exp_mul(e, mh))
        w = out.get(t, 0) - v
        if p:
            w %= p
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def _interreduce(basis, key, p, degree):
    # drop elements with redundant leading terms
    keep = []
    for i, g in enumerate(basis):
        red = False
        for j, h in enumerate(basis):
            if i == j or h.lt[0] != g.lt[0]:
                continue
            if _divides(h.lt[1], g.lt[1]) and (h.lt[1] != g.lt[1] or j < i):
                red = True
                break
        if not red:
            keep.append(g)
    keep.sort(key=lambda g: key(g.lt), reverse=True)
    out = []
    for i, g in enumerate(keep):
        others = Reducer([h for j, h in enumerate(keep) if j != i], p, degree)
        tail = dict(g.terms)
        c = tail.pop(g.lt)
        tail = others.reduce(tail, key, full=True)
        tail[g.lt] = c
        out.append(Element(tail, g.lt, g.sugar))
    return out
