"""Independent dense oracle: cohomology of a complex of graded modules
computed one internal degree at a time with plain Gaussian elimination.

Nothing here uses Groebner bases.  A graded piece of the base ring is the
span of the monomials of that degree modulo the span of ``m * g`` for the
defining-ideal generators ``g``; relations of presented terms are treated
the same way.  Over an Artinian base only finitely many internal degrees
are nonzero, so the oracle is exact; over a polynomial base it is exact
for each internal degree it is asked about.
"""

from fractions import Fraction


def _norm(x, p):
    return x % p if p else Fraction(x)


def field_rank(rows, p):
    """Rank of a dense matrix (list of rows) over Q (p = 0) or F_p."""
    m = [[_norm(x, p) for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p) if p else 1 / m[rank][c]
        row = [(x * inv) % p if p else x * inv for x in m[rank]]
        m[rank] = row
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [((a - f * b) % p if p else a - f * b) for a, b in zip(m[r], row)]
        rank += 1
        if rank == len(m):
            break
    return rank


def monomials(weights, d):
    """Exponent vectors of weighted degree d, in a fixed order."""
    out = []
    n = len(weights)

    def rec(i, rem, cur):
        if i == n:
            if rem == 0:
                out.append(tuple(cur))
            return
        w = weights[i]
        for k in range(rem // w + 1):
            cur.append(k)
            rec(i + 1, rem - k * w, cur)
            cur.pop()

    if d >= 0:
        rec(0, d, [])
    return out


class DegreePiece:
    """Coordinates for ``(free module)_t`` with basis ``(component, monomial)``
    together with the span of its degree-t relations."""

    def __init__(self, ring, twists, t, relations=()):
        self.ring = ring
        self.index = {}
        for c, tw in enumerate(twists):
            for e in monomials(ring.weights, t - tw):
                self.index[(c, e)] = len(self.index)
        self.dim = len(self.index)
        rel_rows = []
        ideal = [dict(g) for g in ring._ideal_src]
        # defining ideal times every basis vector
        for c, tw in enumerate(twists):
            for g in ideal:
                gd = max(ring.wdeg(e) for e in g)
                for m in monomials(ring.weights, t - tw - gd):
                    rel_rows.append(self.coords({(c, tuple(a + b for a, b in zip(e, m))): x
                                                 for e, x in g.items()}))
        for r in relations:
            rd = None
            for (c, e), x in r.items():
                rd = ring.wdeg(e) + twists[c]
                break
            if rd is None:
                continue
            for m in monomials(ring.weights, t - rd):
                rel_rows.append(self.coords({(c, tuple(a + b for a, b in zip(e, m))): x
                                             for (c, e), x in r.items()}))
        self.relations = [r for r in rel_rows if any(r)]
        self._rrank = None

    def coords(self, v):
        row = [0] * self.dim
        for t, x in v.items():
            row[self.index[t]] = x
        return row

    @property
    def rel_rank(self):
        if self._rrank is None:
            self._rrank = field_rank(self.relations, self.ring.p) if self.relations else 0
        return self._rrank


def _image_rows(ring, cols, src, tgt):
    """Rows (in target coordinates) spanning d(src_t)."""
    rows = []
    for (c, m), _k in sorted(src.index.items(), key=lambda kv: kv[1]):
        col = cols[c]
        v = {}
        for (j, e), x in col.items():
            t = (j, tuple(a + b for a, b in zip(e, m)))
            v[t] = v.get(t, 0) + x
        rows.append(tgt.coords({t: x for t, x in v.items() if x}))
    return rows


def cohomology_dim(C, i, t):
    """dim_k H^i(C)_t."""
    ring = C.ring
    p = ring.p
    P = {j: DegreePiece(ring, C.tw(j), t, C.rels(j)) for j in (i - 1, i, i + 1)}
    if P[i].dim == 0:
        return 0

    def rk(rows):
        rows = [r for r in rows if any(r)]
        return field_rank(rows, p) if rows else 0

    out_rows = _image_rows(ring, C.d(i), P[i], P[i + 1]) if C.rank(i + 1) else []
    in_rows = _image_rows(ring, C.d(i - 1), P[i - 1], P[i]) if C.rank(i - 1) else []
    r_out = rk(out_rows + P[i + 1].relations) - P[i + 1].rel_rank if out_rows else 0
    r_in = rk(in_rows + P[i].relations)
    return P[i].dim - r_out - r_in


def internal_range(C, pad=0):
    """Internal degrees that can be nonzero over an Artinian base."""
    ring = C.ring
    top = max((ring.wdeg(e) for e in _standard_monomials(ring)), default=0) if ring.nvars else 0
    tws = [t for i in C.degrees for t in C.tw(i)]
    if not tws:
        return range(0)
    return range(min(tws) - pad, max(tws) + top + pad + 1)


def _standard_monomials(ring):
    """Monomials that survive in an Artinian quotient (for the degree range)."""
    out = []
    d = 0
    while True:
        ms = monomials(ring.weights, d)
        if not ms:
            return out
        piece = DegreePiece(ring, [0], d)
        if piece.dim - piece.rel_rank == 0:
            return out
        out += ms
        d += 1
        if d > 200:
            raise ValueError("base ring is not Artinian")


def cohomology_profile(C, tmin=None, tmax=None):
    """{i: {t: dim}} for the nonzero graded pieces of H^i(C).  Over a
    polynomial base a degree range must be given."""
    if tmin is None or tmax is None:
        if not (C.ring.ideal and C.ring.is_artinian):
            raise ValueError("internal degree range required over a non-Artinian base")
        ts = internal_range(C)
    else:
        ts = range(tmin, tmax + 1)
    out = {}
    for i in C.degrees:
        row = {}
        for t in ts:
            dm = cohomology_dim(C, i, t)
            if dm:
                row[t] = dm
        if row:
            out[i] = row
    return out


def total_dims(C):
    """{i: dim_k H^i(C)} over an Artinian base."""
    return {i: sum(v.values()) for i, v in cohomology_profile(C).items()}


def oracle_inf(C, tmin=None, tmax=None):
    prof = cohomology_profile(C, tmin, tmax)
    return min(prof) if prof else None
