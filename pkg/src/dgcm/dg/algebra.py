"""Finite semi-free DG-algebras over a graded base ring.

A :class:`DGAlgebra` is a free module over the base ring with basis
elements in nonpositive cohomological degrees; basis element 0 is the unit
and is the only basis element in degree 0.  Products of basis elements are
tabulated (missing entries are zero) and the differential is given on the
basis.  Elements are sparse vectors whose components are basis indices.
"""

from itertools import combinations

from ..algebra.ring import Poly
from ..algebra.modules import Ideal, PresentedModule, subquotient_presentation
from ..algebra.groebner import kernel
from ..algebra.vec import v_iadd, v_mul_term, v_scale, v_add, v_reduce_ring, v_degree
from ..complexes import Complex


class DGError(ValueError):
    pass


class DGAlgebra:
    def __init__(self, ring, basis, mult, diff, tag=("base",), labels=None,
                 gorenstein=False, check=True):
        self.ring = ring
        self.basis = [tuple(b) for b in basis]
        if self.basis[0] != (0, 0):
            raise DGError("basis element 0 must be the unit in bidegree (0, 0)")
        if any(c > 0 for c, _ in self.basis):
            raise DGError("DG-algebra basis must live in nonpositive degrees")
        if sum(1 for c, _ in self.basis if c == 0) != 1:
            raise DGError("the degree-0 part must be free of rank one on the unit")
        self.mult = {k: v_reduce_ring(dict(v), ring) for k, v in mult.items()}
        self.mult = {k: v for k, v in self.mult.items() if v}
        self.diff = [v_reduce_ring(dict(v), ring) for v in diff]
        self.tag = tag
        self.labels = labels or [str(i) for i in range(len(self.basis))]
        self.gorenstein = gorenstein
        self._complex = None
        self._h0 = None
        if check:
            self.validate()

    @property
    def rank(self):
        return len(self.basis)

    def cdeg(self, a):
        return self.basis[a][0]

    def ideg(self, a):
        return self.basis[a][1]

    def unit(self):
        return {(0, self.ring.zero_exp): self.ring.field.one}

    def basis_vec(self, a):
        return {(a, self.ring.zero_exp): self.ring.field.one}

    def mul_basis(self, a, b):
        if a == 0:
            return self.basis_vec(b)
        if b == 0:
            return self.basis_vec(a)
        return self.mult.get((a, b), {})

    def mul(self, u, v):
        p = self.ring.p
        out = {}
        for (a, e1), c1 in u.items():
            for (b, e2), c2 in v.items():
                prod = self.mul_basis(a, b)
                if prod:
                    e = tuple(x + y for x, y in zip(e1, e2))
                    v_iadd(out, v_mul_term(prod, e, c1 * c2, p), p)
        return v_reduce_ring(out, self.ring)

    def d(self, u):
        p = self.ring.p
        out = {}
        for (a, e), c in u.items():
            v_iadd(out, v_mul_term(self.diff[a], e, c, p), p)
        return out

    def vec_cdeg(self, u):
        ds = {self.cdeg(a) for (a, _e) in u}
        if len(ds) != 1:
            return None
        return ds.pop()

    def validate(self):
        ring = self.ring
        p = ring.p
        n = self.rank
        tw = [b[1] for b in self.basis]
        for a in range(n):
            da = self.diff[a]
            if da:
                if {self.cdeg(b) for (b, _e) in da} != {self.cdeg(a) + 1}:
                    raise DGError(f"d of basis element {a} has wrong cohomological degree")
                if v_degree(da, tw, ring.wdeg) != self.ideg(a):
                    raise DGError(f"d of basis element {a} is not homogeneous of its degree")
            if v_reduce_ring(self.d(da), ring):
                raise DGError(f"d o d != 0 on basis element {a}")
        for a in range(1, n):
            for b in range(1, n):
                ab = self.mul_basis(a, b)
                sa, sb = self.cdeg(a), self.cdeg(b)
                if ab:
                    if {self.cdeg(c) for (c, _e) in ab} != {sa + sb}:
                        raise DGError(f"product {a}*{b} has wrong degree")
                ba = self.mul_basis(b, a)
                sign = -1 if (sa * sb) % 2 else 1
                if v_add(ab, v_scale(ba, sign, p), p, -1):
                    raise DGError(f"product {a}*{b} is not graded-commutative")
                if a == b and sa % 2 and ab:
                    raise DGError(f"odd element {a} does not square to zero")
                lhs = self.d(ab)
                rhs = self.mul(self.diff[a], self.basis_vec(b))
                sgn = -1 if sa % 2 else 1
                rhs = v_add(rhs, v_scale(self.mul(self.basis_vec(a), self.diff[b]), sgn, p), p)
                if v_reduce_ring(v_add(lhs, rhs, p, -1), ring):
                    raise DGError(f"Leibniz rule fails on basis pair ({a}, {b})")
        for a in range(1, n):
            for b in range(1, n):
                ab = self.mul_basis(a, b)
                for c in range(1, n):
                    x = self.mul(ab, self.basis_vec(c))
                    y = self.mul(self.basis_vec(a), self.mul_basis(b, c))
                    if v_add(x, y, p, -1):
                        raise DGError(f"associativity fails on ({a}, {b}, {c})")

    # -- underlying complex
    def complex(self):
        """R as a complex of free base-ring modules (basis order kept)."""
        if self._complex is None:
            self._complex, self._loc = _as_complex(self.ring, self.basis, self.diff, [])
        return self._complex

    def cohomology_at(self, i):
        return self.complex().cohomology_at(i)

    def bounds(self):
        return self.complex().cohomology_bounds()

    @property
    def amplitude(self):
        return self.bounds().amp

    @property
    def inf(self):
        return self.bounds().inf

    def h0(self):
        """H^0(R) data: the ideal I0 of the base with H^0(R) = base/I0."""
        if self._h0 is None:
            gens = []
            for a in range(self.rank):
                if self.cdeg(a) == -1:
                    f = {e: c for (b, e), c in self.diff[a].items() if b == 0}
                    if f:
                        gens.append(Poly(self.ring, f))
            self._h0 = Ideal(self.ring, gens)
        return self._h0

    def dim_h0(self):
        from ..algebra.modules import krull_dimension
        return krull_dimension(self.h0())

    def describe(self):
        if self.tag[0] == "koszul":
            return "koszul(" + ", ".join(self.ring.format(f) for f in self.tag[1]) + ")"
        if self.tag[0] == "sqzero":
            return f"sqzero({self.tag[1].text()}, {self.tag[2]})"
        return "base"

    def __repr__(self):
        return f"DGAlgebra({self.describe()}, rank={self.rank})"


def _as_complex(ring, basis, diff, relations):
    """Group a bigraded basis by cohomological degree.  Returns the complex
    and the map global index -> (degree, local index)."""
    loc = {}
    tw = {}
    for g, (c, t) in enumerate(basis):
        lst = tw.setdefault(c, [])
        loc[g] = (c, len(lst))
        lst.append(t)
    diffs = {}
    for g, v in enumerate(diff):
        c, k = loc[g]
        col = {(loc[h][1], e): x for (h, e), x in v.items()}
        diffs.setdefault(c, [{} for _ in tw[c]])[k] = col
    rels = {}
    for r in relations:
        if not r:
            continue
        c = loc[next(iter(r))[0]][0]
        rels.setdefault(c, []).append({(loc[h][1], e): x for (h, e), x in r.items()})
    return Complex(ring, tw, diffs, rels, check=False), loc


# ---------------------------------------------------------------- constructors

def base_dg_ring(ring):
    """The base ring itself as a DG-ring concentrated in degree 0."""
    return DGAlgebra(ring, [(0, 0)], {}, [{}], ("base",), ["1"],
                     gorenstein=_base_is_gorenstein(ring))


def _base_is_gorenstein(ring):
    if not ring.is_artinian:
        return True
    # zero-dimensional quotient: Gorenstein presentation when the defining
    # ideal is a complete intersection (minimal generator count = nvars)
    return _ideal_min_gens(ring) == ring.nvars


def _ideal_min_gens(ring):
    amb = ring.ambient()
    gens = [g for g in ring.ideal]
    cols = [{(0, e): v for e, v in g.items()} for g in gens]
    tw = [amb.raw_degree(g) for g in gens]
    rels = kernel(amb, cols, tw, [0])
    M = PresentedModule(amb, tw, rels, check=False)
    return M.prune()[0].rank


def _inversions(seq):
    n = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                n += 1
    return n


def koszul_dg_ring(ring, elems):
    """Koszul complex K(ring; elems) as an exterior DG-algebra with
    d(e_i) = elems[i].  Basis: subsets ordered by size, then lexicographically."""
    raw = []
    for i, f in enumerate(elems):
        if not isinstance(f, Poly):
            f = ring(f)
        f = f.terms
        if not f:
            raise DGError(f"element {i} is zero")
        d = ring.raw_degree(f)
        if d is None:
            raise DGError(f"element {i} is not homogeneous")
        if d == 0:
            raise DGError(f"element {i} is a unit; Koszul elements must lie in the maximal ideal")
        raw.append(f)
    k = len(raw)
    degs = [ring.raw_degree(f) for f in raw]
    subsets = []
    for size in range(k + 1):
        subsets += list(combinations(range(k), size))
    index = {S: i for i, S in enumerate(subsets)}
    basis = [(-len(S), sum(degs[s] for s in S)) for S in subsets]
    labels = ["1" if not S else "*".join(f"e{s + 1}" for s in S) for S in subsets]
    mult = {}
    z = ring.zero_exp
    p = ring.p
    for S in subsets[1:]:
        for T in subsets[1:]:
            if set(S) & set(T):
                continue
            U = tuple(sorted(S + T))
            sign = -1 if _inversions(S + T) % 2 else 1
            mult[(index[S], index[T])] = {(index[U], z): ring.field(sign)}
    diff = []
    for S in subsets:
        v = {}
        for pos, s in enumerate(S):
            rest = S[:pos] + S[pos + 1:]
            sign = -1 if pos % 2 else 1
            for e, c in raw[s].items():
                t = (index[rest], e)
                w = v.get(t, 0) + sign * c
                if p:
                    w %= p
                if w:
                    v[t] = w
                else:
                    v.pop(t, None)
        diff.append(v)
    gor = _base_is_gorenstein(ring)
    return DGAlgebra(ring, basis, mult, diff, ("koszul", tuple(dict(f) for f in raw)),
                     labels, gorenstein=gor)


def free_resolution(M):
    """Minimal graded free resolution of a presented module over a
    polynomial ring: list of ``(twists, columns)`` with ``columns`` the
    matrix of ``F_t -> F_{t-1}`` (empty for t = 0)."""
    ring = M.ring
    if ring.is_artinian:
        raise DGError("free resolutions are only computed over polynomial bases")
    Mp, _kept = M.prune()
    out = [(list(Mp.twists), [])]
    if Mp.rank == 0:
        return out
    tw = list(Mp.twists)
    cols = list(Mp.relations)
    while cols:
        ctw = [v_degree(c, tw, ring.wdeg) for c in cols]
        # keep a minimal generating set of the image
        _m, reps = subquotient_presentation(ring, tw, cols, [], check=False)
        ctw = [v_degree(c, tw, ring.wdeg) for c in reps]
        out.append((ctw, reps))
        syz = kernel(ring, reps, ctw, tw)
        tw, cols = ctw, syz
    return out


def square_zero_extension(ring, M, j):
    """Trivial extension ``ring + Sigma^j M`` with zero products on the
    module part.  The module enters through its minimal free resolution
    placed in degrees -j, -j-1, ..."""
    j = int(j)
    if j <= 0:
        raise DGError("the shift of a square-zero extension must be positive")
    if ring.is_artinian:
        raise DGError("square-zero extensions are built over polynomial bases only")
    res = free_resolution(M)
    basis = [(0, 0)]
    labels = ["1"]
    diff = [{}]
    offsets = []
    for t, (tw, cols) in enumerate(res):
        offsets.append(len(basis))
        for a, w in enumerate(tw):
            basis.append((-j - t, w))
            labels.append(f"u{t}_{a}")
    for t, (tw, cols) in enumerate(res):
        for a in range(len(tw)):
            if t == 0:
                diff.append({})
            else:
                off = offsets[t - 1]
                diff.append({(k + off, e): c for (k, e), c in cols[a].items()})
    return DGAlgebra(ring, basis, {}, diff, ("sqzero", M, j), labels, gorenstein=False)


def h0_presentation(R):
    """H^0(R) as ``base/I0``, with the maximal ideal and residue field.

    Returns a dict with keys ``ideal`` (I0), ``module`` (H^0(R) as a cyclic
    presented module), ``maximal`` (the irrelevant ideal) and ``residue``
    (k as a presented module)."""
    I0 = R.h0()
    ring = R.ring
    return {
        "ideal": I0,
        "module": I0.quotient_module(),
        "maximal": Ideal.maximal(ring),
        "residue": Ideal.maximal(ring).quotient_module(),
    }
