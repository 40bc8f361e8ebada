"""Sparse vectors of polynomials.

A vector is a dict ``{(component, exponent_tuple): coefficient}``.  A matrix
is a list of column vectors; column ``j`` is the image of basis vector ``j``.
"""


def v_add(a, b, p, c=1):
    """a + c*b (new dict)."""
    out = dict(a)
    for t, v in b.items():
        w = out.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def v_iadd(a, b, p, c=1):
    """In-place a += c*b."""
    for t, v in b.items():
        w = a.get(t, 0) + c * v
        if p:
            w %= p
        if w:
            a[t] = w
        else:
            a.pop(t, None)
    return a


def v_scale(a, c, p):
    if not c:
        return {}
    if p:
        out = {}
        for t, v in a.items():
            w = (v * c) % p
            if w:
                out[t] = w
        return out
    return {t: v * c for t, v in a.items()}


def v_mul_term(a, e, c, p):
    """c * x^e * a."""
    out = {}
    for (k, f), v in a.items():
        w = v * c
        if p:
            w %= p
        if w:
            out[(k, tuple(x + y for x, y in zip(f, e)))] = w
    return out


def v_mul_poly(a, f, p):
    """Multiply every entry of ``a`` by the raw polynomial ``f``."""
    out = {}
    for e, c in f.items():
        v_iadd(out, v_mul_term(a, e, c, p), p)
    return out


def v_apply(cols, a, p):
    """Image of ``a`` under the matrix with the given columns."""
    out = {}
    for (k, e), c in a.items():
        col = cols[k]
        for (j, f), v in col.items():
            t = (j, tuple(x + y for x, y in zip(f, e)))
            w = out.get(t, 0) + v * c
            if p:
                w %= p
            if w:
                out[t] = w
            else:
                out.pop(t, None)
    return out


def v_compose(outer, inner, p):
    """Columns of outer . inner."""
    return [v_apply(outer, col, p) for col in inner]


def v_reindex(a, mapping):
    """Rename components; components mapped to None are dropped."""
    out = {}
    for (k, e), v in a.items():
        j = mapping(k) if callable(mapping) else mapping.get(k)
        if j is not None:
            out[(j, e)] = v
    return out


def v_from_entries(entries):
    """Vector from a list of raw polynomials (entry i is component i)."""
    out = {}
    for i, f in enumerate(entries):
        for e, v in f.items():
            out[(i, e)] = v
    return out


def v_entries(a, n, zero_exp=None):
    """List of raw polynomials, one per component."""
    out = [dict() for _ in range(n)]
    for (k, e), v in a.items():
        out[k][e] = v
    return out


def v_component(a, k):
    return {e: v for (j, e), v in a.items() if j == k}


def v_degree(a, twists, wdeg):
    """Twisted degree of a homogeneous vector, None if zero or inhomogeneous."""
    d = None
    for (k, e) in a:
        x = wdeg(e) + twists[k]
        if d is None:
            d = x
        elif d != x:
            return None
    return d


def v_components(a):
    return sorted({k for (k, _e) in a})


def v_reduce_ring(a, ring):
    """Reduce every component modulo the ring's defining ideal."""
    if not ring.is_artinian or not a:
        return a
    by = {}
    for (k, e), v in a.items():
        by.setdefault(k, {})[e] = v
    out = {}
    for k, f in by.items():
        for e, v in ring.reduce(f).items():
            out[(k, e)] = v
    return out


def v_key(a):
    """Hashable canonical form."""
    return tuple(sorted(a.items()))
