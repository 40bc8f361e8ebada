"""Bounded cohomological complexes of finite free graded modules.

``C^i`` is the free module ``oplus ring(-twists[i][a])``; the differential
``d^i : C^i -> C^{i+1}`` is stored as a list of column vectors (raw sparse
vectors, see :mod:`dgcm.algebra.vec`).  A complex may optionally carry
relation vectors in each degree, in which case ``C^i`` means the quotient of
the free module by them; such complexes are produced internally (smart
truncations, residue-field modules) and are turned back into free ones by
:func:`free_model`.  Sign conventions:

* shift ``(Sigma^s C)^i = C^{i+s}`` with differential ``(-1)^s d``;
* cone of ``f: C -> D`` has ``C^{i+1} + D^i`` and ``d(c, e) = (-dc, f c + de)``;
* tensor uses the Koszul sign ``d(a x b) = da x b + (-1)^|a| a x db``;
* Hom uses ``d(f) = d o f - (-1)^|f| f o d``.
"""

from .algebra.modules import PresentedModule, subquotient_presentation, ModuleGB
from .algebra.groebner import kernel
from .algebra.ring import Poly
from .algebra.vec import v_apply, v_add, v_scale, v_degree, v_reduce_ring, v_entries


class ComplexError(ValueError):
    pass


class Bounds:
    """inf/sup/amp of the cohomology, or the verdict ``exact``."""

    def __init__(self, inf=None, sup=None):
        self.exact = inf is None
        self.inf = inf
        self.sup = sup
        self.amp = None if self.exact else sup - inf

    def as_tuple(self):
        return "exact" if self.exact else (self.inf, self.sup, self.amp)

    def __eq__(self, other):
        if isinstance(other, Bounds):
            return self.as_tuple() == other.as_tuple()
        return self.as_tuple() == other

    def __repr__(self):
        return "Bounds(exact)" if self.exact else f"Bounds(inf={self.inf}, sup={self.sup}, amp={self.amp})"


class Cohomology:
    """H^i of a complex: pruned presentation plus cycle representatives."""

    def __init__(self, degree, module, reps):
        self.degree = degree
        self.module = module
        self.reps = reps

    def is_zero(self):
        return self.module.rank == 0

    def __repr__(self):
        return f"H^{self.degree}: {self.module!r}"


class Complex:
    """Bounded complex of (possibly presented) free graded modules."""

    def __init__(self, ring, twists, diffs=None, relations=None, check=True):
        self.ring = ring
        self.twists = {i: list(t) for i, t in twists.items() if len(t)}
        diffs = diffs or {}
        self.diffs = {}
        for i, cols in diffs.items():
            if i not in self.twists:
                if any(cols):
                    raise ComplexError(f"differential given in degree {i} with zero source")
                continue
            cols = [v_reduce_ring(dict(c), ring) for c in cols]
            if len(cols) != len(self.twists[i]):
                raise ComplexError(f"d^{i} has {len(cols)} columns, expected {len(self.twists[i])}")
            if any(cols):
                self.diffs[i] = cols
        rel = relations or {}
        self.relations = {i: [v_reduce_ring(dict(r), ring) for r in rs] for i, rs in rel.items()}
        self.relations = {i: [r for r in rs if r] for i, rs in self.relations.items() if i in self.twists}
        self.relations = {i: rs for i, rs in self.relations.items() if rs}
        self._coh = {}
        self._rgb = {}
        if check:
            self.validate()

    # -- shape
    @property
    def degrees(self):
        return sorted(self.twists)

    @property
    def lo(self):
        return min(self.twists) if self.twists else 0

    @property
    def hi(self):
        return max(self.twists) if self.twists else -1

    @property
    def is_free(self):
        return not self.relations

    def rank(self, i):
        return len(self.twists.get(i, ()))

    def tw(self, i):
        return self.twists.get(i, [])

    def d(self, i):
        cols = self.diffs.get(i)
        if cols is None:
            return [{} for _ in range(self.rank(i))]
        return cols

    def rels(self, i):
        return self.relations.get(i, [])

    def rel_gb(self, i):
        if i not in self._rgb:
            self._rgb[i] = ModuleGB(self.ring, self.tw(i), self.rels(i))
        return self._rgb[i]

    def reduce(self, i, v):
        """Normal form of a vector of C^i modulo its relations."""
        v = v_reduce_ring(v, self.ring)
        if not self.rels(i):
            return v
        return self.rel_gb(i).reduce(v)

    def apply_d(self, i, v):
        return v_apply(self.d(i), v, self.ring.p)

    def validate(self):
        ring = self.ring
        for i, cols in self.diffs.items():
            src = self.tw(i)
            tgt = self.tw(i + 1)
            for j, col in enumerate(cols):
                for (k, _e) in col:
                    if k >= len(tgt):
                        raise ComplexError(f"d^{i} column {j} has an entry outside C^{i + 1}")
                if not col:
                    continue
                dg = v_degree(col, tgt, ring.wdeg)
                if dg is None:
                    raise ComplexError(f"d^{i} column {j} is not homogeneous")
                if dg != src[j]:
                    raise ComplexError(
                        f"d^{i} column {j} has degree {dg}, expected twist {src[j]}")
        for i, rs in self.relations.items():
            for j, r in enumerate(rs):
                if v_degree(r, self.tw(i), ring.wdeg) is None:
                    raise ComplexError(f"relation {j} in degree {i} is not homogeneous")
                img = self.reduce(i + 1, self.apply_d(i, r))
                if img:
                    raise ComplexError(f"d^{i} does not preserve relation {j}")
        for i in self.diffs:
            if i + 1 not in self.diffs:
                continue
            for j, col in enumerate(self.diffs[i]):
                w = self.reduce(i + 2, self.apply_d(i + 1, col))
                if w:
                    (k, e), c = next(iter(sorted(w.items())))
                    raise ComplexError(
                        f"d^{i + 1} o d^{i} != 0: column {j}, row {k} has term "
                        f"{ring.format({e: c})}")

    # -- cohomology
    def cohomology_at(self, i):
        if i in self._coh:
            return self._coh[i]
        ring = self.ring
        n = self.rank(i)
        if n == 0:
            h = Cohomology(i, PresentedModule(ring, []), [])
        else:
            cols = self.d(i)
            if any(cols):
                z = kernel(ring, cols, self.tw(i), self.tw(i + 1), self.rels(i + 1))
            else:
                zero = ring.zero_exp
                z = [{(a, zero): ring.field.one} for a in range(n)]
            b = [c for c in self.d(i - 1) if c]
            m, reps = subquotient_presentation(ring, self.tw(i), z, b, self.rels(i), check=False)
            h = Cohomology(i, m, reps)
        self._coh[i] = h
        return h

    def cohomology(self):
        return {i: self.cohomology_at(i) for i in self.degrees}

    def cohomology_bounds(self, lo=None, hi=None):
        """Least and greatest degree with nonzero cohomology (within
        ``[lo, hi]`` when given), or the ``exact`` verdict."""
        degs = [i for i in self.degrees if (lo is None or i >= lo) and (hi is None or i <= hi)]
        nz = [i for i in degs if not self.cohomology_at(i).is_zero()]
        if not nz:
            return Bounds()
        return Bounds(min(nz), max(nz))

    def is_exact(self, lo=None, hi=None):
        return self.cohomology_bounds(lo, hi).exact

    # -- constructions
    def shift(self, s):
        """Sigma^s: degree i holds C^{i+s}; differential times (-1)^s."""
        sign = -1 if s % 2 else 1
        p = self.ring.p
        tw = {i - s: t for i, t in self.twists.items()}
        d = {i - s: [v_scale(c, sign, p) for c in cols] for i, cols in self.diffs.items()}
        rel = {i - s: rs for i, rs in self.relations.items()}
        return Complex(self.ring, tw, d, rel, check=False)

    def identity(self):
        z = self.ring.zero_exp
        one = self.ring.field.one
        return ComplexMap(self, self, {i: [{(a, z): one} for a in range(self.rank(i))]
                                       for i in self.degrees})

    def summary(self):
        return {i: (self.rank(i), list(self.tw(i))) for i in self.degrees}

    def to_dict(self):
        """Structured serialization with canonical polynomial text."""
        ring = self.ring
        out = {"degrees": [self.lo, self.hi], "twists": {}, "d": {}, "relations": {}}
        for i in self.degrees:
            out["twists"][str(i)] = list(self.tw(i))
            if i in self.diffs:
                rows = self.rank(i + 1)
                out["d"][str(i)] = [[ring.format(f) for f in v_entries(c, rows)] for c in self.diffs[i]]
            if i in self.relations:
                out["relations"][str(i)] = [[ring.format(f) for f in v_entries(r, self.rank(i))]
                                            for r in self.relations[i]]
        return out

    @classmethod
    def from_dict(cls, ring, data):
        tw = {int(i): t for i, t in data["twists"].items()}
        d = {}
        for i, cols in data.get("d", {}).items():
            d[int(i)] = [_col_from_text(ring, c) for c in cols]
        rel = {}
        for i, rs in data.get("relations", {}).items():
            rel[int(i)] = [_col_from_text(ring, c) for c in rs]
        return cls(ring, tw, d, rel)

    def __repr__(self):
        return "Complex(" + ", ".join(f"{i}: {self.rank(i)}" for i in self.degrees) + ")"


def _col_from_text(ring, entries):
    v = {}
    for k, s in enumerate(entries):
        for e, c in ring._raw(s).items():
            v[(k, e)] = c
    return v


FreeComplex = Complex


class ComplexMap:
    """Degree-preserving chain map; ``mats[i]`` maps C^i basis vectors to
    vectors of D^i."""

    def __init__(self, source, target, mats, check=True):
        self.source = source
        self.target = target
        self.ring = source.ring
        self.mats = {}
        for i in source.degrees:
            cols = mats.get(i)
            if cols is None:
                cols = [{} for _ in range(source.rank(i))]
            if len(cols) != source.rank(i):
                raise ComplexError(f"map in degree {i} has wrong number of columns")
            self.mats[i] = [v_reduce_ring(dict(c), self.ring) for c in cols]
        if check:
            self.validate()

    def col(self, i, a):
        return self.mats.get(i, [{}] * max(a + 1, 1))[a]

    def apply(self, i, v):
        return v_apply(self.mats.get(i, []), v, self.ring.p) if v else {}

    def validate(self):
        S, T = self.source, self.target
        ring = self.ring
        for i in S.degrees:
            for a, c in enumerate(self.mats[i]):
                if c and v_degree(c, T.tw(i), ring.wdeg) != S.tw(i)[a]:
                    raise ComplexError(f"map column {a} in degree {i} is not of degree 0")
                lhs = T.apply_d(i, c)
                rhs = self.apply(i + 1, S.d(i)[a])
                diff = T.reduce(i + 1, v_add(lhs, rhs, ring.p, -1))
                if diff:
                    raise ComplexError(f"chain map square does not commute in degree {i}")
            for j, r in enumerate(S.rels(i)):
                if T.reduce(i, self.apply(i, r)):
                    raise ComplexError(f"map does not preserve relation {j} in degree {i}")

    def is_zero(self):
        return not any(any(c) for c in self.mats.values())

    def induced_on_cohomology(self, i):
        """Matrix (list of target-coordinate vectors) of H^i(f) on the
        generators of H^i(source), expressed as cycle vectors of the target;
        plus a flag telling whether the induced map is zero."""
        hs = self.source.cohomology_at(i)
        T = self.target
        imgs = [self.apply(i, z) for z in hs.reps]
        bnd = [c for c in T.d(i - 1) if c] + T.rels(i)
        gb = ModuleGB(self.ring, T.tw(i), bnd)
        zero = all(gb.contains(v) for v in imgs)
        return imgs, zero


def cone(f):
    """Mapping cone: cone^i = C^{i+1} + D^i, d(c, e) = (-dc, f(c) + de)."""
    C, D = f.source, f.target
    ring = C.ring
    p = ring.p
    degs = sorted(set(i - 1 for i in C.degrees) | set(D.degrees))
    tw = {}
    diffs = {}
    rels = {}
    for i in degs:
        nc = C.rank(i + 1)
        tw[i] = C.tw(i + 1) + D.tw(i)
        cols = []
        nc1 = C.rank(i + 2)
        for a in range(nc):
            dc = v_scale(C.d(i + 1)[a], -1, p)
            fc = f.apply(i + 1, {(a, ring.zero_exp): ring.field.one})
            v = dict(dc)
            for (k, e), x in fc.items():
                v[(k + nc1, e)] = x
            cols.append(v)
        for b in range(D.rank(i)):
            cols.append({(k + nc1, e): x for (k, e), x in D.d(i)[b].items()})
        diffs[i] = cols
        rs = [dict(r) for r in C.rels(i + 1)]
        rs += [{(k + nc, e): x for (k, e), x in r.items()} for r in D.rels(i)]
        if rs:
            rels[i] = rs
    return Complex(ring, tw, diffs, rels, check=False)


def tensor_complexes(C, D):
    """Total tensor product with the Koszul sign rule.  Basis of degree n
    is ordered by the degree i of the C-factor, then C index, then D index."""
    if C.ring != D.ring:
        raise ComplexError("complexes over different rings")
    ring = C.ring
    p = ring.p
    index = {}
    tw = {}
    for i in C.degrees:
        for j in D.degrees:
            n = i + j
            lst = tw.setdefault(n, [])
            for a, ta in enumerate(C.tw(i)):
                for b, tb in enumerate(D.tw(j)):
                    index[(i, a, j, b)] = len(lst)
                    lst.append(ta + tb)
    diffs = {}
    rels = {}
    for (i, a, j, b), pos in sorted(index.items(), key=lambda kv: (kv[0][0] + kv[0][2], kv[1])):
        n = i + j
        col = {}
        for (k, e), x in C.d(i)[a].items():
            t = (index[(i + 1, k, j, b)], e)
            col[t] = (col.get(t, 0) + x)
        sign = -1 if i % 2 else 1
        for (k, e), x in D.d(j)[b].items():
            t = (index[(i, a, j + 1, k)], e)
            col[t] = col.get(t, 0) + sign * x
        if p:
            col = {t: v % p for t, v in col.items() if v % p}
        else:
            col = {t: v for t, v in col.items() if v}
        diffs.setdefault(n, [None] * len(tw[n]))[pos] = col
    for i in C.degrees:
        for r in C.rels(i):
            for j in D.degrees:
                for b in range(D.rank(j)):
                    rels.setdefault(i + j, []).append(
                        {(index[(i, k, j, b)], e): x for (k, e), x in r.items()})
    for j in D.degrees:
        for r in D.rels(j):
            for i in C.degrees:
                for a in range(C.rank(i)):
                    rels.setdefault(i + j, []).append(
                        {(index[(i, a, j, k)], e): x for (k, e), x in r.items()})
    return Complex(ring, tw, diffs, rels, check=False)


def hom_complexes(C, D):
    """Hom complex; degree n holds prod_i Hom(C^i, D^{i+n}).

    Basis element ``(i, a, b)`` is the map ``e_a -> e_b`` from C^i to
    D^{i+n}, with twist ``twist_D(b) - twist_C(a)``.  ``C`` must be free.
    """
    if not C.is_free:
        raise ComplexError("Hom source must be a free complex")
    ring = C.ring
    p = ring.p
    index = {}
    tw = {}
    for i in C.degrees:
        for j in D.degrees:
            n = j - i
            lst = tw.setdefault(n, [])
            for a, ta in enumerate(C.tw(i)):
                for b, tb in enumerate(D.tw(j)):
                    index[(i, a, b)] = index.get((i, a, b), {})
                    index[(i, a, b)][n] = len(lst)
                    lst.append(tb - ta)
    pos = {}
    for (i, a, b), dn in index.items():
        for n, k in dn.items():
            pos[(n, i, a, b)] = k
    # transpose of d_C: for each (i, a) the entries (a', f) with d_C(e_a') having f at row a
    dct = {}
    for i in C.degrees:
        for a2, col in enumerate(C.d(i - 1)):
            for (a, e), x in col.items():
                dct.setdefault((i, a), []).append((a2, e, x))
    diffs = {}
    for (n, i, a, b), k in pos.items():
        col = {}
        # d_D o f
        for (b2, e), x in D.d(i + n)[b].items():
            t = (pos[(n + 1, i, a, b2)], e)
            col[t] = col.get(t, 0) + x
        # -(-1)^n f o d_C : component on maps C^{i-1} -> D^{i+n}
        sgn = 1 if n % 2 else -1
        for (a2, e, x) in dct.get((i, a), ()):
            t = (pos[(n + 1, i - 1, a2, b)], e)
            col[t] = col.get(t, 0) + sgn * x
        if p:
            col = {t: v % p for t, v in col.items() if v % p}
        else:
            col = {t: v for t, v in col.items() if v}
        diffs.setdefault(n, [None] * len(tw[n]))[k] = col
    rels = {}
    for j in D.degrees:
        for r in D.rels(j):
            for i in C.degrees:
                n = j - i
                for a in range(C.rank(i)):
                    rels.setdefault(n, []).append(
                        {(pos[(n, i, a, b)], e): x for (b, e), x in r.items()})
    return Complex(ring, tw, diffs, rels, check=False)


def build_complex(ring, diffs, twists=None, relations=None):
    """Validated complex from differential matrices.

    ``diffs[i]`` is the matrix of ``d^i`` as a list of rows (entries are
    :class:`Poly` or polynomial text).  Without ``twists``, twists are
    inferred from the top degree down, starting at 0.
    """
    mats = {}
    for i, rows in diffs.items():
        rows = [[x if isinstance(x, Poly) else ring(x) for x in r] for r in rows]
        mats[i] = rows
        for r, row in enumerate(rows):
            for c, f in enumerate(row):
                if not f.is_homogeneous():
                    raise ComplexError(f"d^{i} entry ({r}, {c}) is not homogeneous")
    ranks = {}
    for i, rows in mats.items():
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != nc:
                raise ComplexError(f"d^{i} has ragged rows")
        for deg, n in ((i, nc), (i + 1, nr)):
            if ranks.get(deg, n) != n:
                raise ComplexError(f"rank mismatch in degree {deg}")
            ranks[deg] = n
    if twists is None:
        twists = {}
        for deg in sorted(ranks, reverse=True):
            if deg + 1 not in twists or deg not in mats:
                twists.setdefault(deg, [0] * ranks[deg])
                if deg not in mats:
                    continue
            rows = mats[deg]
            tgt = twists[deg + 1]
            src = []
            for c in range(ranks[deg]):
                t = None
                for r in range(len(rows)):
                    f = rows[r][c]
                    if f.is_zero():
                        continue
                    val = f.degree + tgt[r]
                    if t is None:
                        t = val
                    elif t != val:
                        raise ComplexError(f"d^{deg} column {c} has inconsistent twists")
                src.append(t if t is not None else 0)
            twists[deg] = src
    tw = {int(i): list(t) for i, t in twists.items()}
    for i, n in ranks.items():
        tw.setdefault(i, [0] * n)
        if len(tw[i]) != n:
            raise ComplexError(f"twist list in degree {i} has the wrong length")
    cols = {}
    for i, rows in mats.items():
        cs = []
        for c in range(ranks[i]):
            v = {}
            for r in range(len(rows)):
                for e, x in rows[r][c].terms.items():
                    v[(r, e)] = x
            cs.append(v)
        cols[i] = cs
    return Complex(ring, tw, cols, relations)


def free_module_complex(ring, twists=(0,), degree=0):
    """A free module concentrated in one degree."""
    return Complex(ring, {degree: list(twists)})


def smart_truncate(C, n, side="<="):
    """Smart truncation ``C^{<=n}`` or ``C^{>n}``, returned as a free model
    (resolved over the base) together with nothing else.

    ``<=``: ... -> C^{n-1} -> Z^n -> 0;  ``>``: 0 -> C^{n+1}/B^{n+1} -> C^{n+2} -> ...
    """
    P = presented_truncation(C, n, side)
    return free_model(P)


def presented_truncation(C, n, side="<="):
    """Smart truncation as a complex with relations (not yet free)."""
    ring = C.ring
    if side in ("<=", "le"):
        if C.hi <= n:
            # nothing above n: only Z^n matters, which is all of C^n if d^n = 0
            if not any(C.d(n)):
                return C
        tw = {i: C.tw(i) for i in C.degrees if i < n}
        diffs = {i: C.d(i) for i in C.degrees if i < n - 1}
        rels = {i: C.rels(i) for i in C.degrees if i < n}
        if C.rank(n):
            cols = C.d(n)
            if any(cols):
                z = kernel(ring, cols, C.tw(n), C.tw(n + 1), C.rels(n + 1))
            else:
                zero = ring.zero_exp
                z = [{(a, zero): ring.field.one} for a in range(C.rank(n))]
            ztw = [v_degree(v, C.tw(n), ring.wdeg) for v in z]
            gb = ModuleGB(ring, C.tw(n), z, C.rels(n), extended=True)
            k = len(z)
            # d^{n-1} factors through Z^n
            dcols = []
            for col in C.d(n - 1):
                if not col:
                    dcols.append({})
                    continue
                w = gb.lift(col)
                if w is None:
                    raise ComplexError("boundary outside cycles")
                dcols.append({t: x for t, x in w.items() if t[0] < k})
            zrels = kernel(ring, z, ztw, C.tw(n), C.rels(n))
            if z:
                tw[n] = ztw
                if C.rank(n - 1):
                    diffs[n - 1] = dcols
                if zrels:
                    rels[n] = zrels
        return Complex(ring, tw, diffs, rels, check=False)
    if side in (">", "gt"):
        tw = {i: C.tw(i) for i in C.degrees if i > n}
        diffs = {i: C.d(i) for i in C.degrees if i > n}
        rels = {i: C.rels(i) for i in C.degrees if i > n}
        if C.rank(n + 1):
            b = [c for c in C.d(n) if c]
            rels[n + 1] = list(C.rels(n + 1)) + b
        return Complex(ring, tw, diffs, rels, check=False)
    raise ComplexError(f"unknown truncation side {side!r}")


def free_model(C):
    """Free complex quasi-isomorphic to ``C`` (identity if already free)."""
    if C.is_free or (C.ring.is_artinian and C.ring.nvars):
        return C
    from .dg.resolution import resolve_complex
    return resolve_complex(C)
